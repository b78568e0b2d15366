#pragma once

#include "duopoly/cascade.hpp"
#include "duopoly/config.hpp"
#include "duopoly/emit.hpp"
#include "duopoly/equilibrium.hpp"
#include "duopoly/errors.hpp"
#include "duopoly/market.hpp"
#include "duopoly/stability.hpp"
#include "duopoly/sweep.hpp"
