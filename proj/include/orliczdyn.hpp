#pragma once

#include "orliczdyn/errors.hpp"
#include "orliczdyn/group.hpp"
#include "orliczdyn/young.hpp"
#include "orliczdyn/orlicz.hpp"
#include "orliczdyn/weighted.hpp"
#include "orliczdyn/parallel.hpp"
#include "orliczdyn/criteria.hpp"
#include "orliczdyn/lab.hpp"
#include "orliczdyn/config.hpp"
#include "orliczdyn/report.hpp"
