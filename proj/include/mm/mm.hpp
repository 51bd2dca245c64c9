#pragma once

#include "mm/alphabet.hpp"
#include "mm/conjugacy.hpp"
#include "mm/coset_enumeration.hpp"
#include "mm/decision.hpp"
#include "mm/free_group.hpp"
#include "mm/iclc.hpp"
#include "mm/length_functions.hpp"
#include "mm/metrics.hpp"
#include "mm/miller.hpp"
#include "mm/presentation.hpp"
#include "mm/stallings.hpp"
#include "mm/word.hpp"
