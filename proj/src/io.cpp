#include "madasub/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "madasub/errors.hpp"

namespace madasub {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\"");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\"");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& value) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void check_written(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::uint64_t parse_count(const std::string& text, const std::string& what) {
  std::uint64_t v = 0;
  const std::string t = trim(text);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) throw IoError("invalid " + what + " '" + t + "'");
  return v;
}

double parse_real(const std::string& text, const std::string& what) {
  double v;
  if (!parse_double(text, v)) throw IoError("invalid " + what + " '" + trim(text) + "'");
  return v;
}

// Reads '#key=value' header lines up to the column header row.
std::map<std::string, std::string> read_header(std::istream& in, std::string& columns) {
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("#", 0) == 0) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) out[trim(line.substr(1, eq - 1))] = line.substr(eq + 1);
      continue;
    }
    columns = line;
    return out;
  }
  throw IoError("file ends before the column header");
}

const std::string& require_key(const std::map<std::string, std::string>& header,
                               const std::string& key) {
  auto it = header.find(key);
  if (it == header.end()) throw IoError("header is missing '" + key + "'");
  return it->second;
}

}  // namespace

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

Dataset load_csv(const std::filesystem::path& path, const std::string& response, bool header,
                 Family family, std::vector<std::string>* warnings) {
  std::ifstream in = open_in(path);
  std::string line;
  std::vector<std::string> column_names;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto cells = split(line, ',');
    if (header && column_names.empty()) {
      for (auto& c : cells) column_names.push_back(trim(c));
      width = cells.size();
      continue;
    }
    if (width == 0) width = cells.size();
    if (cells.size() != width) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                    std::to_string(width) + " cells, found " + std::to_string(cells.size()));
    }
    std::vector<double> row(width);
    for (std::size_t c = 0; c < width; ++c) {
      const std::string cell = trim(cells[c]);
      if (cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan") {
        throw IoError(path.string() + ":" + std::to_string(line_no) + ": missing value in column " +
                      std::to_string(c + 1));
      }
      if (!parse_double(cell, row[c]) || !std::isfinite(row[c])) {
        throw IoError(path.string() + ":" + std::to_string(line_no) + ": non-numeric cell '" +
                      cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (width < 2) throw IoError("CSV needs a response column and at least one covariate");
  if (!header) {
    for (std::size_t c = 0; c < width; ++c) column_names.push_back("V" + std::to_string(c + 1));
  }

  std::size_t response_col = width;
  for (std::size_t c = 0; c < width && header; ++c) {
    if (column_names[c] == response) response_col = c;
  }
  if (response_col == width) {
    double idx;
    if (parse_double(response, idx) && idx >= 1 && idx <= static_cast<double>(width) &&
        idx == std::floor(idx)) {
      response_col = static_cast<std::size_t>(idx) - 1;
    } else {
      throw ConfigError("response column '" + response + "' not found");
    }
  }

  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(width - 1));
  Eigen::VectorXd y(n);
  std::vector<std::string> names;
  for (std::size_t c = 0; c < width; ++c) {
    if (c != response_col) names.push_back(column_names[c]);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index out_col = 0;
    for (std::size_t c = 0; c < width; ++c) {
      if (c == response_col) {
        y[i] = rows[i][c];
      } else {
        x(i, out_col++) = rows[i][c];
      }
    }
  }
  if (warnings) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (n > 0 && (x.col(j).array() == x(0, j)).all()) {
        warnings->push_back("covariate '" + names[j] + "' has zero variance");
      }
    }
  }
  return make_dataset(std::move(x), std::move(y), family, std::move(names));
}

void write_dataset(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out = open_out(path);
  for (const auto& name : data.names) out << name << ',';
  out << "y\n";
  for (Eigen::Index i = 0; i < data.x.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.x.cols(); ++j) out << format_double(data.x(i, j)) << ',';
    out << format_double(data.y[i]) << '\n';
  }
  check_written(out, path);
}

void write_trace(const std::filesystem::path& path, const ChainTrace& trace, double epsilon) {
  std::ofstream out = open_out(path);
  out << "# madasub trace\n";
  out << "# sampler=" << trace.sampler << '\n';
  out << "# kernel=" << trace.kernel << '\n';
  out << "# seed=" << trace.seed << '\n';
  out << "# p=" << trace.p << '\n';
  out << "# burn_in=" << trace.burn_in << '\n';
  out << "# epsilon=" << format_double(epsilon) << '\n';
  out << "# start=" << trace.start.to_hex() << '\n';
  out << "# start_log_kernel=" << format_double(trace.start_log_kernel) << '\n';
  out << "# encoding=hex bitstring, least-significant bit = variable 1\n";
  out << "iteration,accept,model,log_kernel\n";
  std::string buf;
  for (std::size_t t = 0; t < trace.records.size(); ++t) {
    const auto& rec = trace.records[t];
    buf.clear();
    buf += std::to_string(t + 1);
    buf += rec.accept ? ",1," : ",0,";
    buf += rec.accepted.to_hex();
    buf += ',';
    buf += format_double(rec.log_kernel);
    buf += '\n';
    out << buf;
  }
  check_written(out, path);
}

ChainTrace read_trace(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string columns;
  const auto header = read_header(in, columns);
  if (trim(columns) != "iteration,accept,model,log_kernel") throw IoError("not a trace file");
  ChainTrace trace;
  trace.sampler = require_key(header, "sampler");
  trace.kernel = require_key(header, "kernel");
  trace.seed = parse_count(require_key(header, "seed"), "seed");
  trace.p = parse_count(require_key(header, "p"), "p");
  trace.burn_in = parse_count(require_key(header, "burn_in"), "burn-in");
  trace.start = ModelIndex::from_hex(trim(require_key(header, "start")), trace.p);
  trace.start_log_kernel = parse_real(require_key(header, "start_log_kernel"), "log kernel");
  trace.inclusion_counts.assign(trace.p, 0);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 4) throw IoError("malformed trace row: " + line);
    if (parse_count(cells[0], "iteration") != trace.records.size() + 1) {
      throw IoError("trace rows are not consecutive");
    }
    IterationRecord rec;
    rec.accept = parse_count(cells[1], "accept flag") == 1;
    rec.accepted = ModelIndex::from_hex(trim(cells[2]), trace.p);
    rec.proposed = rec.accept ? rec.accepted : ModelIndex(trace.p);
    rec.log_kernel = parse_real(cells[3], "log kernel");
    for (auto j : rec.accepted.members()) ++trace.inclusion_counts[j];
    trace.records.push_back(std::move(rec));
  }
  return trace;
}

void write_checkpoint(const std::filesystem::path& path, const RoundCheckpoint& checkpoint,
                      std::size_t iterations_per_round) {
  std::ofstream out = open_out(path);
  const std::size_t workers = checkpoint.joint.size();
  out << "# madasub checkpoint\n";
  out << "# round=" << checkpoint.round << '\n';
  out << "# workers=" << workers << '\n';
  out << "# iterations_per_round=" << iterations_per_round << '\n';
  out << "variable,total_count";
  for (std::size_t k = 0; k < workers; ++k) out << ",rbar_" << k + 1;
  out << '\n';
  for (std::size_t j = 0; j < checkpoint.total_counts.size(); ++j) {
    out << j + 1 << ',' << checkpoint.total_counts[j];
    for (std::size_t k = 0; k < workers; ++k) out << ',' << format_double(checkpoint.joint[k][j]);
    out << '\n';
  }
  check_written(out, path);
}

RoundCheckpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string columns;
  const auto header = read_header(in, columns);
  RoundCheckpoint cp;
  cp.round = parse_count(require_key(header, "round"), "round");
  const std::size_t workers = parse_count(require_key(header, "workers"), "workers");
  cp.joint.assign(workers, {});
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != workers + 2) throw IoError("malformed checkpoint row: " + line);
    cp.total_counts.push_back(parse_count(cells[1], "count"));
    for (std::size_t k = 0; k < workers; ++k) cp.joint[k].push_back(parse_real(cells[k + 2], "rbar"));
  }
  return cp;
}

void write_pips(const std::filesystem::path& path, const std::vector<std::string>& names,
                const std::vector<double>& pips, const std::vector<double>& proposal) {
  std::ofstream out = open_out(path);
  out << "index,name,pip,proposal\n";
  for (std::size_t j = 0; j < pips.size(); ++j) {
    out << j + 1 << ',' << (j < names.size() ? names[j] : "x" + std::to_string(j + 1)) << ','
        << format_double(pips[j]) << ',';
    if (j < proposal.size()) out << format_double(proposal[j]);
    out << '\n';
  }
  check_written(out, path);
}

void write_model_table(const std::filesystem::path& path, const ExactPosterior& posterior) {
  std::ofstream out = open_out(path);
  out << "model,size,probability\n";
  for (std::size_t mask = 0; mask < posterior.probabilities.size(); ++mask) {
    const ModelIndex s = ModelIndex::from_mask(mask, posterior.p);
    out << s.to_hex() << ',' << s.size() << ',' << format_double(posterior.probabilities[mask]) << '\n';
  }
  check_written(out, path);
}

void write_summary(const std::filesystem::path& path, const KeyValues& entries) {
  std::ofstream out = open_out(path);
  for (const auto& [key, value] : entries) out << key << " = " << value << '\n';
  check_written(out, path);
}

KeyValues read_summary(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  KeyValues out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw IoError("malformed summary line: " + line);
    out.emplace_back(line.substr(0, eq), line.substr(eq + 3));
  }
  return out;
}

}  // namespace madasub
