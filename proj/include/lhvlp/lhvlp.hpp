#pragma once

#include <lhvlp/errors.hpp>
#include <lhvlp/ghz_paradox.hpp>
#include <lhvlp/inequalities.hpp>
#include <lhvlp/io.hpp>
#include <lhvlp/lp.hpp>
#include <lhvlp/nelder_mead.hpp>
#include <lhvlp/optimizer.hpp>
#include <lhvlp/photonic.hpp>
#include <lhvlp/quantum.hpp>
#include <lhvlp/report.hpp>
#include <lhvlp/strategies.hpp>
#include <lhvlp/tensor.hpp>
#include <lhvlp/threshold.hpp>
