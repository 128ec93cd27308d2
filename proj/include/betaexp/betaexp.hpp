#pragma once

#include "backend.hpp"
#include "beta.hpp"
#include "caps.hpp"
#include "counting.hpp"
#include "density.hpp"
#include "errors.hpp"
#include "garsia.hpp"
#include "io.hpp"
#include "numeric.hpp"
#include "random_beta.hpp"
#include "word.hpp"
