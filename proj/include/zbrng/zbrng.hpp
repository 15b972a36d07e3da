#pragma once

#include "zbrng/error.hpp"
#include "zbrng/exact.hpp"
#include "zbrng/matrix.hpp"
#include "zbrng/prime_field.hpp"
#include "zbrng/rng_core.hpp"
#include "zbrng/splitting.hpp"
#include "zbrng/spectra.hpp"
#include "zbrng/quotients.hpp"
#include "zbrng/hadamard.hpp"
#include "zbrng/generators.hpp"
#include "zbrng/io.hpp"
