// SPDX-License-Identifier: Apache-2.0
//
// debris-tensor: tensor-based space debris detection for LEO satellite links
// Copyright (C) 2026 The debris-tensor authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Debris detectors: tensor-based (estimated path count > 1) and the
// energy-detector baseline with an empirically calibrated threshold.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cpd.hpp"
#include "errors.hpp"
#include "tensor.hpp"

namespace debris
{

struct DetectionOutcome
{
    bool detected = false;
    double statistic = 0.0;
    double threshold = 0.0;
    bool inconclusive = false; ///< solver failed; neither a detection nor a miss
    std::string failure;
};

struct CalibrationResult
{
    double threshold = 0.0;
    double target_pfa = 0.0;
    int trials_used = 0;
    double achieved_pfa = 0.0;
};

inline constexpr double tbd_threshold = 1.5; // "more than one path"

/*!
 * Detector front-end scaling 1 / (sigma (sqrt I + sqrt J + sqrt K) margin).
 *
 * sigma (sqrt I + sqrt J + sqrt K) is roughly the magnitude of the strongest
 * rank-1 term hiding in an I x J x K noise tensor of per-entry variance
 * sigma^2, so after scaling noise-only components sit near 1 / margin. The
 * ridge weight mu then fixes the survival threshold 2 mu^{3/4} relative to
 * the noise floor.
 */
inline double detector_input_scale(const Dims3 &dims, double noise_var, double margin)
{
    if (!(noise_var > 0.0))
        throw InvalidInput("detector_input_scale: noise variance must be > 0");
    if (!(margin > 0.0))
        throw InvalidInput("detector_input_scale: margin must be > 0");
    const double spectral = std::sqrt(static_cast<double>(dims.I)) + std::sqrt(static_cast<double>(dims.J)) +
                            std::sqrt(static_cast<double>(dims.K));
    return 1.0 / (std::sqrt(noise_var) * spectral * margin);
}

inline ComplexTensor3 to_detector_units(ComplexTensor3 y, double noise_var, double margin)
{
    y *= Complex(detector_input_scale(y.dims(), noise_var, margin), 0.0);
    return y;
}

inline DetectionOutcome tbd_detect(const ComplexTensor3 &y, const AlsConfig &cfg, double threshold_rel)
{
    DetectionOutcome out;
    out.threshold = tbd_threshold;
    try
    {
        out.statistic = estimate_paths(y, cfg, threshold_rel);
        out.detected = out.statistic > out.threshold;
    }
    catch (const NumericalFailure &e)
    {
        out.inconclusive = true;
        out.failure = e.what();
    }
    return out;
}

/// Threshold = order statistic x_(ceil((1 - pfa) n)) of the H0 energies, so that
/// the strict test energy > threshold fires on at most a fraction pfa of them.
inline CalibrationResult ebd_calibrate(std::vector<double> h0_energies, double target_pfa)
{
    if (!(target_pfa > 0.0 && target_pfa < 1.0))
        throw InvalidInput("ebd_calibrate: target_pfa must lie in (0, 1)");
    if (h0_energies.size() < 100)
        throw InvalidInput("ebd_calibrate: need at least 100 H0 samples, got " + std::to_string(h0_energies.size()));
    for (double e : h0_energies)
        if (!std::isfinite(e))
            throw InvalidInput("ebd_calibrate: non-finite energy");
    std::sort(h0_energies.begin(), h0_energies.end());
    const auto n = h0_energies.size();
    auto rank = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * (1.0 - target_pfa) - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, n);

    CalibrationResult cal;
    cal.threshold = h0_energies[rank - 1];
    cal.target_pfa = target_pfa;
    cal.trials_used = static_cast<int>(n);
    const auto above = std::count_if(h0_energies.begin(), h0_energies.end(), [&](double e) { return e > cal.threshold; });
    cal.achieved_pfa = static_cast<double>(above) / static_cast<double>(n);
    return cal;
}

inline DetectionOutcome ebd_detect(const ComplexTensor3 &y, const CalibrationResult &cal)
{
    DetectionOutcome out;
    out.statistic = squared_norm(y);
    out.threshold = cal.threshold;
    out.detected = out.statistic > out.threshold;
    return out;
}

} // namespace debris
