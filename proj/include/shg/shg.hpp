#pragma once

#include "shg/errors.hpp"
#include "shg/version.hpp"
#include "shg/spectrum.hpp"
#include "shg/sphere_grid.hpp"
#include "shg/fields.hpp"
#include "shg/transform.hpp"
#include "shg/projectors.hpp"
#include "shg/random.hpp"
#include "shg/dynamics.hpp"
#include "shg/observables.hpp"
#include "shg/resonance.hpp"
#include "shg/strichartz.hpp"
#include "shg/inequalities.hpp"
