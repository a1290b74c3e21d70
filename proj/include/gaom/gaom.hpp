#pragma once

/// Gain-assisted optomechanics toolkit: steady-state transmission,
/// multistability classification, nonreciprocal amplification analysis and
/// output-noise spectra for a two-cavity/one-mechanical-mode system with
/// optical gain in the first cavity.

#include "gaom/config.hpp"
#include "gaom/constants.hpp"
#include "gaom/cubic.hpp"
#include "gaom/effective.hpp"
#include "gaom/errors.hpp"
#include "gaom/matrix.hpp"
#include "gaom/noise.hpp"
#include "gaom/nonreciprocity.hpp"
#include "gaom/params.hpp"
#include "gaom/presets.hpp"
#include "gaom/quadrature.hpp"
#include "gaom/runner.hpp"
#include "gaom/stability.hpp"
#include "gaom/steady_state.hpp"
#include "gaom/table.hpp"
