#include "lingdim/io/report.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "lingdim/io/files.hpp"

namespace lingdim::io {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const json& cell) {
  if (cell.is_null()) return "";
  if (cell.is_boolean()) return cell.get<bool>() ? "true" : "false";
  if (cell.is_number_integer()) return std::to_string(cell.get<std::int64_t>());
  if (cell.is_number()) return format_double(cell.get<double>());
  const std::string s = cell.is_string() ? cell.get<std::string>() : cell.dump();
  if (s.find_first_of(",\"\n\r") == std::string::npos && !s.empty()) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line, std::vector<bool>& quoted) {
  std::vector<std::string> out;
  quoted.clear();
  std::string cur;
  bool in_quotes = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        in_quotes = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      in_quotes = true;
      was_quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      quoted.push_back(was_quoted);
      cur.clear();
      was_quoted = false;
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  quoted.push_back(was_quoted);
  return out;
}

json parse_cell(const std::string& s, bool quoted) {
  if (quoted) return s;
  if (s.empty()) return nullptr;
  if (s == "true") return true;
  if (s == "false") return false;
  std::int64_t iv;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), iv);
  if (ec == std::errc() && p == s.data() + s.size()) return iv;
  double dv;
  auto [p2, ec2] = std::from_chars(s.data(), s.data() + s.size(), dv);
  if (ec2 == std::errc() && p2 == s.data() + s.size()) return dv;
  return s;
}

double number(const json& cell, const char* what) {
  if (!cell.is_number()) throw ValidationError(std::string("column '") + what + "' is not numeric");
  return cell.get<double>();
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw ValidationError("table has no column '" + name + "'");
}

std::string to_csv(const Table& t) {
  std::ostringstream out;
  if (!t.meta.empty()) out << "# meta: " << t.meta.dump() << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_field(t.columns[i]);
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << "\n";
  }
  return out.str();
}

std::string to_json(const Table& t) {
  json j;
  j["meta"] = t.meta;
  j["columns"] = t.columns;
  j["rows"] = json::array();
  for (const auto& row : t.rows) j["rows"].push_back(row);
  return j.dump(1) + "\n";
}

Table table_from_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  std::vector<bool> quoted;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!have_header && line.rfind("# meta: ", 0) == 0) {
      t.meta = json::parse(line.substr(8));
      continue;
    }
    auto fields = split_csv_line(line, quoted);
    if (!have_header) {
      t.columns = fields;
      have_header = true;
      continue;
    }
    if (fields.size() != t.columns.size()) throw ValidationError("CSV row width differs from header");
    std::vector<json> row;
    for (std::size_t i = 0; i < fields.size(); ++i) row.push_back(parse_cell(fields[i], quoted[i]));
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw ValidationError("CSV table has no header");
  return t;
}

Table table_from_json(const std::string& text) {
  const json j = json::parse(text);
  Table t;
  if (j.contains("meta")) t.meta = j["meta"];
  t.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& row : j.at("rows")) {
    if (row.size() != t.columns.size()) throw ValidationError("JSON row width differs from columns");
    t.rows.emplace_back(row.begin(), row.end());
  }
  return t;
}

Table read_table(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    if (path.extension() == ".json") return table_from_json(text);
    if (path.extension() == ".csv") return table_from_csv(text);
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  throw ParameterError(path.string() + ": expected a .csv or .json table");
}

void write_table(const std::filesystem::path& prefix, const Table& t, bool overwrite) {
  write_file_atomic(prefix.string() + ".csv", to_csv(t), overwrite);
  write_file_atomic(prefix.string() + ".json", to_json(t), overwrite);
}

Table profiles_to_table(const std::vector<LayerProfile>& profiles, json meta) {
  Table t;
  t.meta = std::move(meta);
  t.columns = {"model", "dataset", "condition", "layer", "metric", "mean", "se", "n_partitions"};
  std::set<std::tuple<std::string, std::string, std::string, int, std::string>> keys;
  for (const auto& p : profiles) {
    p.validate();
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!keys.emplace(p.model, p.dataset, p.condition, p.layers[i], p.metric_name).second) {
        throw ValidationError("duplicate report row for layer " + std::to_string(p.layers[i]) + " of " +
                              p.metric_name);
      }
      if (!std::isfinite(p.mean[i]) || !std::isfinite(p.se[i])) {
        throw ValidationError("non-finite value in profile " + p.metric_name);
      }
      t.rows.push_back({p.model, p.dataset, p.condition, p.layers[i], p.metric_name, p.mean[i], p.se[i],
                        p.n_partitions});
    }
  }
  return t;
}

std::vector<LayerProfile> table_to_profiles(const Table& t) {
  const auto c_model = t.column("model");
  const auto c_dataset = t.column("dataset");
  const auto c_condition = t.column("condition");
  const auto c_layer = t.column("layer");
  const auto c_metric = t.column("metric");
  const auto c_mean = t.column("mean");
  const auto c_se = t.column("se");
  const auto c_parts = t.column("n_partitions");
  auto text = [](const json& cell) { return cell.is_string() ? cell.get<std::string>() : cell.dump(); };

  std::map<std::tuple<std::string, std::string, std::string, std::string>, LayerProfile> grouped;
  std::vector<std::tuple<std::string, std::string, std::string, std::string>> order;
  for (const auto& row : t.rows) {
    const auto key = std::make_tuple(text(row[c_model]), text(row[c_dataset]), text(row[c_condition]),
                                     text(row[c_metric]));
    auto [it, fresh] = grouped.try_emplace(key);
    LayerProfile& p = it->second;
    if (fresh) {
      order.push_back(key);
      std::tie(p.model, p.dataset, p.condition, p.metric_name) = key;
      p.n_partitions = static_cast<int>(number(row[c_parts], "n_partitions"));
      p.se_defined = p.n_partitions > 1;
    }
    p.layers.push_back(static_cast<int>(number(row[c_layer], "layer")));
    p.mean.push_back(number(row[c_mean], "mean"));
    p.se.push_back(number(row[c_se], "se"));
  }
  std::vector<LayerProfile> out;
  for (const auto& key : order) {
    auto& p = grouped[key];
    // Rows may arrive in any order; sort by layer.
    std::vector<std::size_t> idx(p.layers.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return p.layers[a] < p.layers[b]; });
    LayerProfile sorted = p;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      sorted.layers[i] = p.layers[idx[i]];
      sorted.mean[i] = p.mean[idx[i]];
      sorted.se[i] = p.se[idx[i]];
    }
    sorted.validate();
    out.push_back(std::move(sorted));
  }
  return out;
}

}  // namespace lingdim::io
