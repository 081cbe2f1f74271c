#pragma once

#include "udwcp/bec.hpp"
#include "udwcp/config.hpp"
#include "udwcp/errors.hpp"
#include "udwcp/fidelity_map.hpp"
#include "udwcp/modes.hpp"
#include "udwcp/observables.hpp"
#include "udwcp/quadrature.hpp"
#include "udwcp/series.hpp"
