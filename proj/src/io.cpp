#include "blocksdp/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace blocksdp {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

void finish_write(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

Matrix read_edge_list(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<std::pair<int, int>> edges;
  int declared_n = 0, max_node = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      std::istringstream hdr(t.substr(1));
      std::string word;
      if (hdr >> word && word == "n") {
        int n;
        if (hdr >> n && n > 0) declared_n = n;
      }
      continue;
    }
    std::istringstream row(t);
    int i, j;
    if (!(row >> i >> j) || i < 0 || j < 0)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected two nonnegative node ids");
    if (i == j) continue;
    edges.emplace_back(i, j);
    max_node = std::max({max_node, i, j});
  }
  const int n = std::max(declared_n, max_node + 1);
  if (n == 0) throw std::runtime_error(path + ": no nodes found");
  Matrix a = Matrix::Zero(n, n);
  for (auto [i, j] : edges) {
    if (i >= n || j >= n)
      throw std::runtime_error(path + ": node id exceeds declared size");
    a(i, j) = a(j, i) = 1.0;
  }
  return a;
}

void write_edge_list(const std::string& path, const Matrix& a) {
  if (a.rows() != a.cols())
    throw std::runtime_error("write_edge_list: square matrix required");
  std::ofstream out = open_out(path);
  const int n = static_cast<int>(a.rows());
  out << "# n " << n << "\n";
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (a(i, j) != 0.0) out << i << " " << j << "\n";
  finish_write(out, path);
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<double> row;
    std::istringstream cells(t);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        row.push_back(std::stod(trim(cell)));
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": bad number '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": empty matrix");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out = open_out(path);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ",";
      out << format_double(m(i, j));
    }
    out << "\n";
  }
  finish_write(out, path);
}

Labels read_labels(const std::string& path) {
  std::ifstream in = open_in(path);
  Labels out;
  std::vector<int> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    int v;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || v < 1)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected a positive class label");
    values.push_back(v);
    out.K = std::max(out.K, v);
  }
  if (values.empty()) throw std::runtime_error(path + ": no labels found");
  out.values = Eigen::Map<IntVector>(values.data(), values.size());
  out.validate();
  return out;
}

void write_labels(const std::string& path, const Labels& labels) {
  labels.validate();
  std::ofstream out = open_out(path);
  for (int i = 0; i < labels.values.size(); ++i)
    out << labels.values[i] << "\n";
  finish_write(out, path);
}

void write_pgm(const std::string& path, const Matrix& values) {
  std::ofstream out = open_out(path);
  out << "P2\n" << values.cols() << " " << values.rows() << "\n255\n";
  for (int i = 0; i < values.rows(); ++i) {
    for (int j = 0; j < values.cols(); ++j) {
      const double v = std::clamp(values(i, j), 0.0, 1.0);
      if (j) out << " ";
      out << static_cast<int>(std::lround(255.0 * (1.0 - v)));
    }
    out << "\n";
  }
  finish_write(out, path);
}

IniFile read_ini(const std::string& path) {
  std::ifstream in = open_in(path);
  IniFile file;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      file[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty())
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": empty key");
    file[section][key] = trim(t.substr(eq + 1));
  }
  return file;
}

}  // namespace blocksdp
