#pragma once

#include "hvrfif/affine.hpp"
#include "hvrfif/config.hpp"
#include "hvrfif/error.hpp"
#include "hvrfif/expr.hpp"
#include "hvrfif/grid.hpp"
#include "hvrfif/io.hpp"
#include "hvrfif/partition.hpp"
#include "hvrfif/random.hpp"
#include "hvrfif/system1d.hpp"
#include "hvrfif/system2d.hpp"
#include "hvrfif/verify.hpp"
