#pragma once

#include "conelaw/version.hpp"
#include "conelaw/rng.hpp"
#include "conelaw/domain.hpp"
#include "conelaw/fields.hpp"
#include "conelaw/continued_fraction.hpp"
#include "conelaw/checkers.hpp"
#include "conelaw/falsifier.hpp"
#include "conelaw/report.hpp"
