#pragma once

#include "hhaudit/core.hpp"
#include "hhaudit/format.hpp"
#include "hhaudit/quad.hpp"
#include "hhaudit/kernel.hpp"
#include "hhaudit/funcmodel.hpp"
#include "hhaudit/bounds.hpp"
#include "hhaudit/audit.hpp"
#include "hhaudit/sweep.hpp"
