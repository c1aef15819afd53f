#pragma once

#include "kogec/alignment.hpp"
#include "kogec/classify.hpp"
#include "kogec/hangul.hpp"
#include "kogec/kappa.hpp"
#include "kogec/m2.hpp"
#include "kogec/scorer.hpp"
#include "kogec/stats.hpp"
