#pragma once

#include "larinf/lar.hpp"

#include <vector>

namespace larinf {

// sigma_hat^2 = (n - p)^{-1} y_n^T (I - P_X) y_n for the raw-scale response y_n.
double sigma_hat(const StandardizedData& data, const Vector& y_n);
inline double sigma_hat(const StandardizedData& data) { return sigma_hat(data, data.raw_response()); }

// q with P(chi2_df > q) = tail. Throws InvalidTail unless 0 < tail < 1.
double chi2_upper_quantile(int df, double tail);

// thresholds_k = chi2_upper_quantile(p - k + 1, 1/n), k = 1..p.
Vector chi2_thresholds(Index p, Index n);

struct TailSums {
  Vector W;  // n (A_k^{-2} - A_{k-1}^{-2}) C_k^2 / sigma^2
  Vector S;  // S_k = sum_{j >= k} W_j
};

TailSums tail_sums(const LarPath& path, double sigma, Index n);

// Largest prefix over which S strictly exceeds the thresholds (0 if none).
Index estimate_m(const Vector& S, const Vector& thresholds);

// s_k (A_k^{-2} - A_{k-1}^{-2})^{1/2} sqrt(n) (C_hat_k - centers_k) / sigma.
Vector studentized_T(const LarPath& path, const Vector& centers, double sigma, Index n);

struct InferenceReport {
  double sigma_hat = 0.0;
  Vector W;
  Vector S;
  Vector thresholds;
  Index m_bar = 0;
  Vector T_hat;  // relative to the supplied centers (thresholded observed correlations by default)
};

// Runs the deterministic part of the inference pipeline on a sample path of y.
// With no centers given, T_hat is taken against C_hat_k 1(k <= m_bar).
InferenceReport infer(const StandardizedData& data, const LarPath& path);
InferenceReport infer(const StandardizedData& data, const LarPath& path, const Vector& centers);

// C_hat_k 1(k <= m_bar), padded with zeros to the path length.
Vector thresholded_centers(const LarPath& path, Index m_bar);

}  // namespace larinf
