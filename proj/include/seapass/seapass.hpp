#pragma once

#include "seapass/bounds.hpp"
#include "seapass/commands.hpp"
#include "seapass/config.hpp"
#include "seapass/error.hpp"
#include "seapass/even_poly.hpp"
#include "seapass/freq.hpp"
#include "seapass/guidelines.hpp"
#include "seapass/model.hpp"
#include "seapass/passivity.hpp"
#include "seapass/polynomial.hpp"
#include "seapass/rational.hpp"
#include "seapass/roots.hpp"
#include "seapass/routh.hpp"
#include "seapass/sweep.hpp"
#include "seapass/tuner.hpp"
