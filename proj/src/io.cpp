#include "dce/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "dce/errors.hpp"

namespace dce {

std::string format_double(Real v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 16);
  if (res.ec != std::errc{}) {
    throw numerical_error("failed to format floating-point value");
  }
  return std::string(buf, res.ptr);
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json j;
  j["rows"] = static_cast<int>(m.rows());
  j["cols"] = static_cast<int>(m.cols());
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("re") || !j.contains("im")) {
    throw validation_error("matrix JSON needs rows, cols, re, im");
  }
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  if (rows < 0 || cols < 0) throw validation_error("matrix dimensions must be >= 0");
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  const std::size_t count = static_cast<std::size_t>(rows) * cols;
  if (!re.is_array() || !im.is_array() || re.size() != count || im.size() != count) {
    throw validation_error("matrix JSON entry count does not match dimensions");
  }
  ComplexMatrix m(rows, cols);
  std::size_t k = 0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c, ++k) {
      m(r, c) = Complex{re.at(k).get<Real>(), im.at(k).get<Real>()};
    }
  }
  return m;
}

Json transform_to_json(const BogoliubovTransform& t) {
  Json j;
  j["alpha"] = matrix_to_json(t.alpha);
  j["beta"] = matrix_to_json(t.beta);
  return j;
}

BogoliubovTransform transform_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("alpha") || !j.contains("beta")) {
    throw validation_error("transform JSON needs alpha and beta blocks");
  }
  BogoliubovTransform t;
  t.alpha = matrix_from_json(j.at("alpha"));
  t.beta = matrix_from_json(j.at("beta"));
  t.validate_shapes();
  return t;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open " + path + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw io_error("failed writing " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw io_error("failed reading " + path);
  return ss.str();
}

void write_json_file(const std::string& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

Json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw validation_error("file " + path + " is not valid JSON");
  }
  return j;
}

std::string spectrum_csv(const BogoliubovTransform& t) {
  const RealVector numbers = vacuum_particle_numbers(t);
  std::string out = "mode,mean_particles\n";
  for (int m = 0; m < numbers.size(); ++m) {
    out += std::to_string(m + 1);
    out += ',';
    out += format_double(numbers(m));
    out += '\n';
  }
  return out;
}

}  // namespace dce
