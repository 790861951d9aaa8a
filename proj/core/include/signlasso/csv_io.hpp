#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "signlasso/harness.hpp"
#include "signlasso/types.hpp"

namespace signlasso {

/// 17 significant digits ("%.17g"); round-trips every finite double. NaN is
/// written as "nan".
std::string format_double(double x);

/// Headerless, comma-separated, '.' decimal. Blank lines are skipped; ragged
/// rows and unparsable fields raise IoError naming the file and line.
Eigen::MatrixXd read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);

/// A coefficient vector stored either as one column or as one row.
CoefVector read_coef_csv(const std::string& path);
void write_coef_csv(const std::string& path, const CoefVector& beta);

/// Single column of nonnegative integers.
Counts read_counts_csv(const std::string& path);
void write_counts_csv(const std::string& path, const Counts& y);

/// results.csv: header
///   n,replicate,sign_match,An,Bn,irrep_margin,kkt_pass,alpha_n,seed_used,failed
/// one row per (n, replicate) in ascending key order.
std::string results_csv(const ExperimentResult& result);
/// Rebuilds the per-replicate records from results.csv text.
ExperimentResult parse_results_csv(const std::string& text);

/// summary.csv: header
///   n,alpha_n,replicates,failures,recovery_rate,event_rate,mean_irrep_margin,dominance_ok
std::string summary_csv(const std::vector<SummaryRow>& rows);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace signlasso
