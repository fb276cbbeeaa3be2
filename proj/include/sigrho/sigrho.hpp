#pragma once

#include "sigrho/bounds.hpp"
#include "sigrho/constraint_geometry.hpp"
#include "sigrho/numerics.hpp"
#include "sigrho/random.hpp"
#include "sigrho/sequence_io.hpp"
#include "sigrho/steiner_cube.hpp"
#include "sigrho/subconvolutive.hpp"
#include "sigrho/volume_growth.hpp"
