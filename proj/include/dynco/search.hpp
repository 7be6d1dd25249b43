#ifndef DYNCO_SEARCH_HPP
#define DYNCO_SEARCH_HPP

#include "dynco/search/brute_force.hpp"
#include "dynco/search/common.hpp"
#include "dynco/search/game.hpp"
#include "dynco/search/l_functional.hpp"
#include "dynco/search/post_processed.hpp"
#include "dynco/search/sweep.hpp"

#endif  // DYNCO_SEARCH_HPP
