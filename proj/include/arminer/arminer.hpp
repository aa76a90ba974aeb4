#pragma once

#include "arminer/bitmap.hpp"
#include "arminer/error.hpp"
#include "arminer/format.hpp"
#include "arminer/ingest.hpp"
#include "arminer/miner.hpp"
#include "arminer/oracle.hpp"
#include "arminer/predictor.hpp"
#include "arminer/report.hpp"
#include "arminer/rules.hpp"
#include "arminer/txdb.hpp"
#include "arminer/version.hpp"
