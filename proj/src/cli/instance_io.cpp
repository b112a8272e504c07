#include "uzawa/instance_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "uzawa/error.hpp"

namespace uzawa::io {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const json& require_field(const json& doc, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end()) parse_fail(std::string("missing field `") + name + "`");
  return *it;
}

std::size_t read_count(const json& doc, const char* name) {
  const json& v = require_field(doc, name);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    parse_fail(std::string("field `") + name + "` must be a positive integer");
  }
  return v.get<std::size_t>();
}

Vector read_reals(const json& doc, const char* name, std::size_t expected) {
  const json& v = require_field(doc, name);
  if (!v.is_array()) parse_fail(std::string("field `") + name + "` must be an array");
  if (v.size() != expected) {
    parse_fail(std::string("field `") + name + "` has " + std::to_string(v.size()) +
               " entries, expected " + std::to_string(expected));
  }
  Vector out;
  out.reserve(expected);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      parse_fail(std::string("field `") + name + "` entry " + std::to_string(i) +
                 " is not a number");
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

double parse_real(const std::string& cell, std::size_t line, const char* column) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    parse_fail("history line " + std::to_string(line) + ": column `" + column +
               "` is not a real: '" + cell + "'");
  }
  return value;
}

}  // namespace

json instance_to_json(const ContactQP& qp, const json& meta) {
  json doc;
  doc["d"] = qp.dim();
  doc["m"] = qp.ncon();
  doc["K"] = qp.stiffness.data();
  doc["p"] = qp.load;
  doc["N"] = qp.constraint.data();
  doc["h"] = qp.gap_offset;
  doc["meta"] = meta;
  return doc;
}

ContactQP instance_from_json(const json& doc) {
  if (!doc.is_object()) parse_fail("instance document must be a JSON object");
  const std::size_t d = read_count(doc, "d");
  const std::size_t m = read_count(doc, "m");
  const Vector k = read_reals(doc, "K", d * d);
  Vector p = read_reals(doc, "p", d);
  const Vector n = read_reals(doc, "N", m * d);
  Vector h = read_reals(doc, "h", m);

  SymMatrix stiffness(d);
  try {
    stiffness = SymMatrix::from_row_major(d, k);
  } catch (const Error& e) {
    parse_fail(std::string("field `K`: ") + e.what());
  }
  ContactQP qp{std::move(stiffness), std::move(p), DenseMatrix::from_row_major(m, d, n),
               std::move(h)};
  qp.validate();
  return qp;
}

void write_instance(const std::filesystem::path& path, const ContactQP& qp, const json& meta) {
  write_text(path, instance_to_json(qp, meta).dump(1) + "\n");
}

ContactQP read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    parse_fail(path.string() + ": " + e.what());
  }
  return instance_from_json(doc);
}

json spec_to_json(const BenchmarkSpec& spec) {
  return json{
      {"nx", spec.nx},
      {"ny", spec.ny},
      {"width", spec.width},
      {"height", spec.height},
      {"thickness", spec.thickness},
      {"youngs_modulus", spec.youngs_modulus},
      {"poisson_ratio", spec.poisson_ratio},
      {"top_traction", spec.top_traction},
      {"right_traction", spec.right_traction},
      {"right_direction",
       spec.right_direction == RightEdgeLoad::Horizontal ? "horizontal" : "vertical"},
  };
}

std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_history_csv(std::ostream& out, std::span<const IterationRecord> history) {
  out << kHistoryHeader << '\n';
  for (const IterationRecord& rec : history) {
    out << rec.k << ',' << format_real(rec.dual_obj) << ',' << format_real(rec.primal_obj) << ','
        << format_real(rec.residual_total) << ',' << format_real(rec.step_norm) << ','
        << (rec.restarted ? 1 : 0) << '\n';
  }
}

void write_history_csv(const std::filesystem::path& path,
                       std::span<const IterationRecord> history) {
  std::ostringstream out;
  write_history_csv(out, history);
  write_text(path, out.str());
}

std::vector<IterationRecord> read_history_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHistoryHeader) {
    parse_fail("history header does not match `" + std::string(kHistoryHeader) + "`");
  }
  std::vector<IterationRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) {
      parse_fail("history line " + std::to_string(lineno) + " has " +
                 std::to_string(cells.size()) + " columns, expected 6");
    }
    IterationRecord rec;
    const double k = parse_real(cells[0], lineno, "k");
    if (k < 0 || k != static_cast<double>(static_cast<std::size_t>(k))) {
      parse_fail("history line " + std::to_string(lineno) + ": `k` is not a counter");
    }
    rec.k = static_cast<std::size_t>(k);
    rec.dual_obj = parse_real(cells[1], lineno, "dual_obj");
    rec.primal_obj = parse_real(cells[2], lineno, "primal_obj");
    rec.residual_total = parse_real(cells[3], lineno, "residual_total");
    rec.step_norm = parse_real(cells[4], lineno, "step_norm");
    if (cells[5] != "0" && cells[5] != "1") {
      parse_fail("history line " + std::to_string(lineno) + ": `restarted` must be 0 or 1");
    }
    rec.restarted = cells[5] == "1";
    out.push_back(rec);
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

}  // namespace uzawa::io
