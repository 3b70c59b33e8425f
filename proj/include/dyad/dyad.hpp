#pragma once

#include "abm.hpp"
#include "dynamics.hpp"
#include "game.hpp"
#include "io.hpp"
#include "kin.hpp"
#include "rng.hpp"
#include "strategy.hpp"
