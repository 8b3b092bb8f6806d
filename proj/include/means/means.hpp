#pragma once

#include "means/check_report.hpp"
#include "means/checks.hpp"
#include "means/errors.hpp"
#include "means/format.hpp"
#include "means/fx_report.hpp"
#include "means/generator.hpp"
#include "means/homeomorphism.hpp"
#include "means/interval.hpp"
#include "means/mean_spec.hpp"
#include "means/rate_series.hpp"
#include "means/registry.hpp"
#include "means/sampling.hpp"
#include "means/weights.hpp"
