// Copyright 2026 The gpskill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GPSKILL_SIGNATURE_HPP_
#define GPSKILL_SIGNATURE_HPP_

#include <Eigen/Core>

#include "gpskill/skill.hpp"

namespace gpskill {

inline constexpr int kSignatureDepth = 3;
inline constexpr int kMedianHeuristicMaxSamples = 512;

// Depth-3 truncated signature of a path in R^3. Levels are stored in
// lexicographic order: level2[3 i + j], level3[9 i + 3 j + k].
struct SignatureTensor {
  Eigen::Vector3d level1 = Eigen::Vector3d::Zero();
  Eigen::Matrix<double, 9, 1> level2 = Eigen::Matrix<double, 9, 1>::Zero();
  Eigen::Matrix<double, 27, 1> level3 = Eigen::Matrix<double, 27, 1>::Zero();

  // Levels 1 to 3 concatenated (the constant level 0 is omitted).
  Eigen::Matrix<double, 39, 1> flatten() const;
};

// Signature of the single linear segment with increment delta.
SignatureTensor segment_signature(const Eigen::Vector3d& delta);

// Chen product: signature of path a followed by path b.
SignatureTensor chen_product(const SignatureTensor& a, const SignatureTensor& b);

// Signature of the piecewise-linear path through the rows of `path`.
// Throws InvalidArgument with fewer than two samples or depth other than 3.
SignatureTensor truncated_signature(const Matrix3Cols& path, int depth = kSignatureDepth);

// Flattened inner product of two signatures.
double signature_kernel(const SignatureTensor& a, const SignatureTensor& b);

// Median of pairwise distances among pooled samples of both paths. Each
// path contributes at most max_samples / 2 deterministically strided
// samples, so the result does not depend on argument order. Returns 1 when
// the median is zero.
double median_heuristic_lengthscale(const Matrix3Cols& a, const Matrix3Cols& b,
                                    int max_samples = kMedianHeuristicMaxSamples);

struct SimilarityScore {
  double value = 0.0;       // clamped to [0, 1]
  double unclamped = 0.0;   // normalised kernel before clamping
  bool degenerate = false;  // at least one path had a zero signature
};

// Normalised signature-kernel similarity after median-heuristic rescaling.
// Zero-signature paths score 1 against each other and 0 otherwise.
SimilarityScore similarity(const Matrix3Cols& a, const Matrix3Cols& b);

}  // namespace gpskill

#endif  // GPSKILL_SIGNATURE_HPP_
