#include "mlmatrix/matrix_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "mlmatrix/errors.hpp"

namespace mlmatrix {

namespace {

using nlohmann::json;

Complex entry_from_json(const json& e) {
  if (e.is_number()) return Complex(e.get<double>(), 0.0);
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return Complex(e[0].get<double>(), e[1].get<double>());
  throw InvalidInput("matrix file: data entries must be numbers or [re, im] pairs");
}

} // namespace

ComplexMatrix read_matrix_json(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("matrix file: invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw InvalidInput("matrix file: expected an object with rows, cols, data");
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
    throw InvalidInput("matrix file: rows/cols must be integers");
  const int rows = j["rows"].get<int>();
  const int cols = j["cols"].get<int>();
  if (rows <= 0 || cols <= 0) throw InvalidInput("matrix file: rows/cols must be positive");
  const json& data = j["data"];
  if (!data.is_array() || data.size() != static_cast<std::size_t>(rows) * cols)
    throw InvalidInput("matrix file: data length must equal rows*cols");

  ComplexMatrix m(rows, cols);
  std::size_t k = 0;
  for (const json& e : data) m.data()[k++] = entry_from_json(e);
  if (!m.all_finite()) throw InvalidInput("matrix file: entries must be finite");
  return m;
}

void write_matrix_json(const ComplexMatrix& m, std::ostream& out) {
  json data = json::array();
  for (const Complex& z : m.data()) {
    if (z.imag() == 0.0)
      data.push_back(z.real());
    else
      data.push_back(json::array({z.real(), z.imag()}));
  }
  json j{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
  out << j.dump(2) << '\n';
}

ComplexMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open matrix file: " + path);
  return read_matrix_json(in);
}

void save_matrix(const ComplexMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write matrix file: " + path);
  write_matrix_json(m, out);
}

int SampledForcing::dimension() const {
  return samples.empty() ? 0 : static_cast<int>(samples.front().size());
}

ForcingFn SampledForcing::interpolant() const {
  if (times.empty()) throw InvalidInput("sampled forcing: empty table");
  const std::vector<double> ts = times;
  const std::vector<std::vector<double>> vs = samples;
  return [ts, vs](double t) {
    const int n = static_cast<int>(vs.front().size());
    ComplexVector out(n);
    if (t <= ts.front()) {
      for (int k = 0; k < n; ++k) out[k] = vs.front()[k];
      return out;
    }
    if (t >= ts.back()) {
      for (int k = 0; k < n; ++k) out[k] = vs.back()[k];
      return out;
    }
    std::size_t hi = 1;
    while (ts[hi] < t) ++hi;
    const double w = (t - ts[hi - 1]) / (ts[hi] - ts[hi - 1]);
    for (int k = 0; k < n; ++k) out[k] = (1.0 - w) * vs[hi - 1][k] + w * vs[hi][k];
    return out;
  };
}

SampledForcing load_forcing(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open forcing file: " + path);
  SampledForcing f;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    double t;
    if (!(row >> t)) throw InvalidInput("forcing file: malformed row: " + line);
    std::vector<double> vals;
    double v;
    while (row >> v) vals.push_back(v);
    if (vals.empty()) throw InvalidInput("forcing file: row with no values: " + line);
    if (!f.samples.empty() && vals.size() != f.samples.front().size())
      throw InvalidInput("forcing file: inconsistent column count");
    if (!f.times.empty() && t <= f.times.back())
      throw InvalidInput("forcing file: times must be strictly increasing");
    f.times.push_back(t);
    f.samples.push_back(std::move(vals));
  }
  if (f.times.empty()) throw InvalidInput("forcing file: no samples: " + path);
  return f;
}

void write_trajectory(const Trajectory& traj, std::ostream& out) {
  const int n = traj.values.empty() ? 0 : static_cast<int>(traj.values.front().size());
  out << "# t";
  for (int k = 1; k <= n; ++k) out << "\tz" << k;
  out << '\n';
  out << std::setprecision(17);
  for (int i = 0; i < traj.grid.nodes(); ++i) {
    out << traj.grid.t(i);
    if (i == 0 && traj.origin_singular) {
      out << "\tsingular\n";
      continue;
    }
    for (int k = 0; k < n; ++k) {
      const Complex z = traj.values[i][k];
      if (z.imag() == 0.0)
        out << '\t' << z.real();
      else
        out << '\t' << '(' << z.real() << ',' << z.imag() << ')';
    }
    out << '\n';
  }
}

ComplexVector parse_vector_arg(const std::string& arg) {
  std::string contents = arg;
  if (arg.find(',') == std::string::npos && std::filesystem::exists(arg)) {
    std::ifstream in(arg);
    std::stringstream buf;
    buf << in.rdbuf();
    contents = buf.str();
  }
  for (char& c : contents)
    if (c == ',') c = ' ';
  std::istringstream in(contents);
  ComplexVector v;
  double x;
  while (in >> x) v.emplace_back(x, 0.0);
  if (v.empty() || !in.eof())
    throw InvalidInput("cannot parse vector argument: " + arg);
  return v;
}

} // namespace mlmatrix
