#pragma once

#include "dcor/classical.hpp"
#include "dcor/dcov.hpp"
#include "dcor/distance.hpp"
#include "dcor/errors.hpp"
#include "dcor/inference.hpp"
#include "dcor/normal_theory.hpp"
#include "dcor/numerics.hpp"
#include "dcor/rng.hpp"
#include "dcor/simulation.hpp"
