#include "opmean/matrix_io.hpp"

#include <fstream>
#include <sstream>

#include "opmean/errors.hpp"

namespace opmean {

namespace {

using nlohmann::json;

void read_part(const json& rows, const char* name, int n, CMatrix& m, bool imaginary) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
    throw InvalidArgument(std::string("matrix field \"") + name + "\" must be an array of " +
                          std::to_string(n) + " rows");
  }
  for (int i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw InvalidArgument(std::string("row ") + std::to_string(i) + " of \"" + name +
                            "\" must have " + std::to_string(n) + " entries");
    }
    for (int j = 0; j < n; ++j) {
      const json& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number()) {
        throw InvalidArgument(std::string("entry (") + std::to_string(i) + "," +
                              std::to_string(j) + ") of \"" + name + "\" is not a number");
      }
      const double x = v.get<double>();
      if (imaginary) {
        m(i, j).imag(x);
      } else {
        m(i, j).real(x);
      }
    }
  }
}

}  // namespace

HermitianMatrix matrix_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("matrix JSON must be an object");
  if (!j.contains("n") || !j["n"].is_number_integer()) {
    throw InvalidArgument("matrix JSON needs integer field \"n\"");
  }
  const int n = j["n"].get<int>();
  if (n < 1) throw InvalidArgument("matrix dimension n must be >= 1");
  if (!j.contains("re")) throw InvalidArgument("matrix JSON needs field \"re\"");
  CMatrix m = CMatrix::Zero(n, n);
  read_part(j["re"], "re", n, m, false);
  if (j.contains("im")) read_part(j["im"], "im", n, m, true);
  return HermitianMatrix::from_matrix(m);
}

json matrix_to_json(const HermitianMatrix& h) {
  const int n = h.dim();
  json re = json::array();
  json im = json::array();
  bool any_imag = false;
  for (int i = 0; i < n; ++i) {
    json re_row = json::array();
    json im_row = json::array();
    for (int j = 0; j < n; ++j) {
      re_row.push_back(h(i, j).real());
      im_row.push_back(h(i, j).imag());
      any_imag = any_imag || h(i, j).imag() != 0.0;
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  json out = {{"n", n}, {"re", std::move(re)}};
  if (any_imag) out["im"] = std::move(im);
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

HermitianMatrix read_matrix_file(const std::filesystem::path& path) {
  return matrix_from_json(read_json_file(path));
}

void write_matrix_file(const std::filesystem::path& path, const HermitianMatrix& h) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << matrix_to_json(h).dump() << '\n';
}

}  // namespace opmean
