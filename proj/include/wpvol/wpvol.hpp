#pragma once

#include "wpvol/asymptotics.hpp"
#include "wpvol/bigfloat.hpp"
#include "wpvol/bracket.hpp"
#include "wpvol/bracket_cache.hpp"
#include "wpvol/consistency.hpp"
#include "wpvol/geodesic_integrals.hpp"
#include "wpvol/pi_scalar.hpp"
#include "wpvol/quadrature.hpp"
#include "wpvol/rational.hpp"
#include "wpvol/special.hpp"
#include "wpvol/volume_poly.hpp"
#include "wpvol/witten_oracle.hpp"
