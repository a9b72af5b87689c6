#pragma once

#include "bellfilter/chsh.hpp"
#include "bellfilter/error.hpp"
#include "bellfilter/filter.hpp"
#include "bellfilter/lhv.hpp"
#include "bellfilter/nelder_mead.hpp"
#include "bellfilter/pauli.hpp"
#include "bellfilter/state_json.hpp"
#include "bellfilter/vertesi.hpp"
