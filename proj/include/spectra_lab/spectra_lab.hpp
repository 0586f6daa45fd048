#pragma once

#include "valgroup.hpp"
#include "coeff_field.hpp"
#include "hahn.hpp"
#include "padic.hpp"
#include "ambient.hpp"
#include "rings.hpp"
#include "sampler.hpp"
#include "spectra.hpp"
#include "checks.hpp"
#include "instances.hpp"
#include "config.hpp"
#include "report.hpp"
