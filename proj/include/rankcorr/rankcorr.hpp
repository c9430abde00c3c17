#pragma once

#include "rankcorr/core.hpp"
#include "rankcorr/dgp.hpp"
#include "rankcorr/empirical.hpp"
#include "rankcorr/estimators.hpp"
#include "rankcorr/independence.hpp"
#include "rankcorr/inference.hpp"
#include "rankcorr/influence.hpp"
#include "rankcorr/io.hpp"
#include "rankcorr/rng.hpp"
#include "rankcorr/study.hpp"
#include "rankcorr/variance.hpp"
