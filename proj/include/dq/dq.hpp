#pragma once

#include "dq/checks.hpp"
#include "dq/errors.hpp"
#include "dq/field_modes.hpp"
#include "dq/fock_space.hpp"
#include "dq/parallel.hpp"
#include "dq/poly_symbol.hpp"
#include "dq/quasiprob.hpp"
#include "dq/random.hpp"
#include "dq/rational.hpp"
#include "dq/run_config.hpp"
#include "dq/symbol_algebra.hpp"
#include "dq/symbol_parser.hpp"
