#pragma once

#include "nnops/activation.hpp"
#include "nnops/analysis.hpp"
#include "nnops/domain.hpp"
#include "nnops/expression.hpp"
#include "nnops/io.hpp"
#include "nnops/kernel.hpp"
#include "nnops/operators.hpp"
#include "nnops/target.hpp"
#include "nnops/verify.hpp"
