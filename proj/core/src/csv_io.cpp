#include "signlasso/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "signlasso/errors.hpp"

namespace signlasso {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r' && ch != ' ' && ch != '\t') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

template <class T>
T parse_number(const std::string& field, const std::string& where) {
  T value{};
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last) {
    throw IoError(where + ": cannot parse '" + field + "'");
  }
  return value;
}

double parse_double_field(const std::string& field, const std::string& where) {
  if (field == "nan") return std::nan("");
  return parse_number<double>(field, where);
}

std::vector<std::vector<std::string>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    rows.push_back(split_fields(line));
  }
  return rows;
}

bool parse_flag(const std::string& field, const std::string& where) {
  if (field == "1") return true;
  if (field == "0") return false;
  throw IoError(where + ": expected 0 or 1, got '" + field + "'");
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  return fmt::format("{:.17g}", x);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  const auto rows = read_rows(path);
  if (rows.empty()) throw IoError("'" + path + "' is empty");
  const std::size_t cols = rows.front().size();
  Eigen::MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string where = path + ":" + std::to_string(i + 1);
    if (rows[i].size() != cols) throw IoError(where + ": expected " + std::to_string(cols) + " fields");
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Index>(i), static_cast<Index>(j)) = parse_number<double>(rows[i][j], where);
    }
  }
  return m;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
  std::string text;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) text += ',';
      text += format_double(m(i, j));
    }
    text += '\n';
  }
  write_text_file(path, text);
}

CoefVector read_coef_csv(const std::string& path) {
  const Eigen::MatrixXd m = read_matrix_csv(path);
  if (m.cols() == 1) return CoefVector(m.col(0));
  if (m.rows() == 1) return CoefVector(m.row(0).transpose());
  throw IoError("'" + path + "' must hold a single row or a single column");
}

void write_coef_csv(const std::string& path, const CoefVector& beta) {
  write_matrix_csv(path, beta.values());
}

Counts read_counts_csv(const std::string& path) {
  const auto rows = read_rows(path);
  if (rows.empty()) throw IoError("'" + path + "' is empty");
  Counts y;
  y.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string where = path + ":" + std::to_string(i + 1);
    if (rows[i].size() != 1) throw IoError(where + ": counts file must have one column");
    const auto v = parse_number<std::int64_t>(rows[i][0], where);
    if (v < 0) throw IoError(where + ": counts must be nonnegative");
    y.push_back(v);
  }
  return y;
}

void write_counts_csv(const std::string& path, const Counts& y) {
  std::string text;
  for (std::int64_t v : y) text += std::to_string(v) + '\n';
  write_text_file(path, text);
}

std::string results_csv(const ExperimentResult& result) {
  std::string text = "n,replicate,sign_match,An,Bn,irrep_margin,kkt_pass,alpha_n,seed_used,failed\n";
  for (const SizeBlock& block : result.sizes) {
    for (const ReplicateRecord& r : block.replicates) {
      text += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.n, r.replicate, int(r.sign_match),
                          int(r.an_holds), int(r.bn_holds), format_double(r.irrep_margin),
                          int(r.kkt_pass), format_double(r.alpha_n), r.seed_used, int(r.failed));
    }
  }
  return text;
}

ExperimentResult parse_results_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("results.csv is empty");
  std::map<std::int64_t, SizeBlock> blocks;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const auto f = split_fields(line);
    const std::string where = "results.csv:" + std::to_string(lineno);
    if (f.size() != 10) throw IoError(where + ": expected 10 fields");
    ReplicateRecord r;
    r.n = parse_number<std::int64_t>(f[0], where);
    r.replicate = parse_number<int>(f[1], where);
    r.sign_match = parse_flag(f[2], where);
    r.an_holds = parse_flag(f[3], where);
    r.bn_holds = parse_flag(f[4], where);
    r.irrep_margin = parse_double_field(f[5], where);
    r.kkt_pass = parse_flag(f[6], where);
    r.alpha_n = parse_double_field(f[7], where);
    r.seed_used = parse_number<std::uint64_t>(f[8], where);
    r.failed = parse_flag(f[9], where);
    SizeBlock& b = blocks[r.n];
    b.n = r.n;
    b.alpha_n = r.alpha_n;
    b.replicates.push_back(r);
  }
  ExperimentResult out;
  for (auto& [n, block] : blocks) out.sizes.push_back(std::move(block));
  return out;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string text = "n,alpha_n,replicates,failures,recovery_rate,event_rate,mean_irrep_margin,dominance_ok\n";
  for (const SummaryRow& r : rows) {
    text += fmt::format("{},{},{},{},{},{},{},{}\n", r.n, format_double(r.alpha_n), r.replicates,
                        r.failures, format_double(r.recovery_rate), format_double(r.event_rate),
                        format_double(r.mean_irrep_margin), int(r.dominance_ok));
  }
  return text;
}

}  // namespace signlasso
