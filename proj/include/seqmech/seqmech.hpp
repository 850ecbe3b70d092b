#pragma once

// Umbrella header: the whole library in one include.

#include "seqmech/canonical.hpp"
#include "seqmech/cli.hpp"
#include "seqmech/deciders.hpp"
#include "seqmech/definitional.hpp"
#include "seqmech/environment.hpp"
#include "seqmech/errors.hpp"
#include "seqmech/explain.hpp"
#include "seqmech/game.hpp"
#include "seqmech/notions.hpp"
#include "seqmech/oracle.hpp"
#include "seqmech/random_env.hpp"
#include "seqmech/rational.hpp"
#include "seqmech/serialization.hpp"
#include "seqmech/state.hpp"
#include "seqmech/synthesis.hpp"
