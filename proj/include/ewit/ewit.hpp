#pragma once

#include "errors.hpp"
#include "random.hpp"
#include "qops.hpp"
#include "models.hpp"
#include "thermo.hpp"
#include "ent.hpp"
#include "witness.hpp"
#include "gas.hpp"
