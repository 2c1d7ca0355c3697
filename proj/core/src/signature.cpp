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

#include "gpskill/signature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gpskill/errors.hpp"

namespace gpskill {

Eigen::Matrix<double, 39, 1> SignatureTensor::flatten() const {
  Eigen::Matrix<double, 39, 1> v;
  v << level1, level2, level3;
  return v;
}

SignatureTensor segment_signature(const Eigen::Vector3d& d) {
  SignatureTensor s;
  s.level1 = d;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      s.level2[3 * i + j] = d[i] * d[j] / 2.0;
      for (int k = 0; k < 3; ++k) s.level3[9 * i + 3 * j + k] = d[i] * d[j] * d[k] / 6.0;
    }
  }
  return s;
}

SignatureTensor chen_product(const SignatureTensor& a, const SignatureTensor& b) {
  SignatureTensor c;
  c.level1 = a.level1 + b.level1;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      c.level2[3 * i + j] = a.level2[3 * i + j] + a.level1[i] * b.level1[j] + b.level2[3 * i + j];
      for (int k = 0; k < 3; ++k) {
        c.level3[9 * i + 3 * j + k] = a.level3[9 * i + 3 * j + k] +
                                      a.level2[3 * i + j] * b.level1[k] +
                                      a.level1[i] * b.level2[3 * j + k] +
                                      b.level3[9 * i + 3 * j + k];
      }
    }
  }
  return c;
}

SignatureTensor truncated_signature(const Matrix3Cols& path, int depth) {
  if (depth != kSignatureDepth) throw InvalidArgument("only depth-3 signatures are supported");
  if (path.rows() < 2) throw InvalidArgument("signature needs at least two samples");
  if (!path.allFinite()) throw InvalidArgument("signature of a non-finite path");
  SignatureTensor s = segment_signature(path.row(1) - path.row(0));
  for (Eigen::Index i = 2; i < path.rows(); ++i) {
    s = chen_product(s, segment_signature(path.row(i) - path.row(i - 1)));
  }
  // Level 1 is the exact endpoint displacement, free of accumulated rounding.
  s.level1 = (path.row(path.rows() - 1) - path.row(0)).transpose();
  return s;
}

double signature_kernel(const SignatureTensor& a, const SignatureTensor& b) {
  return a.flatten().dot(b.flatten());
}

namespace {

void append_strided(const Matrix3Cols& p, int budget, std::vector<Eigen::Vector3d>& out) {
  const Eigen::Index n = p.rows();
  if (n <= budget) {
    for (Eigen::Index i = 0; i < n; ++i) out.emplace_back(p.row(i).transpose());
    return;
  }
  for (int i = 0; i < budget; ++i) {
    const auto idx = static_cast<Eigen::Index>((static_cast<long long>(i) * n) / budget);
    out.emplace_back(p.row(idx).transpose());
  }
}

}  // namespace

double median_heuristic_lengthscale(const Matrix3Cols& a, const Matrix3Cols& b, int max_samples) {
  std::vector<Eigen::Vector3d> pool;
  const int per_path = std::max(1, max_samples / 2);
  append_strided(a, per_path, pool);
  append_strided(b, per_path, pool);
  std::vector<double> d;
  d.reserve(pool.size() * (pool.size() - 1) / 2);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = i + 1; j < pool.size(); ++j) d.push_back((pool[i] - pool[j]).norm());
  }
  if (d.empty()) return 1.0;
  const std::size_t mid = d.size() / 2;
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid), d.end());
  double median = d[mid];
  if (d.size() % 2 == 0) {
    const double lower = *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (lower + median);
  }
  if (!(median > 0.0) || !std::isfinite(median)) return 1.0;
  return median;
}

SimilarityScore similarity(const Matrix3Cols& a, const Matrix3Cols& b) {
  const double ell = median_heuristic_lengthscale(a, b);
  const SignatureTensor sa = truncated_signature(a / ell);
  const SignatureTensor sb = truncated_signature(b / ell);
  const double kaa = signature_kernel(sa, sa);
  const double kbb = signature_kernel(sb, sb);
  SimilarityScore out;
  if (kaa == 0.0 || kbb == 0.0) {
    out.degenerate = true;
    out.value = (kaa == 0.0 && kbb == 0.0) ? 1.0 : 0.0;
    out.unclamped = out.value;
    return out;
  }
  const double kab = signature_kernel(sa, sb);
  out.unclamped = kab / std::sqrt(kaa * kbb);
  out.value = std::clamp(out.unclamped, 0.0, 1.0);
  return out;
}

}  // namespace gpskill
