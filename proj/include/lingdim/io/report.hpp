#ifndef LINGDIM_IO_REPORT_HPP
#define LINGDIM_IO_REPORT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lingdim/profile/profile.hpp"

namespace lingdim::io {

/// Long-format table. Cells are JSON scalars (string, number, bool, null).
///
/// CSV form: an optional first line "# meta: <compact JSON>", a header line,
/// then one line per row; doubles are printed with 17 significant digits so
/// both forms carry identical values.
/// JSON form: {"meta": {...}, "columns": [...], "rows": [[...], ...]}.
struct Table {
  nlohmann::json meta = nlohmann::json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;

  std::size_t column(const std::string& name) const;
};

std::string to_csv(const Table& t);
std::string to_json(const Table& t);
Table table_from_csv(const std::string& text);
Table table_from_json(const std::string& text);
/// Picks the reader by extension (.csv or .json).
Table read_table(const std::filesystem::path& path);

/// Writes <prefix>.csv and <prefix>.json.
void write_table(const std::filesystem::path& prefix, const Table& t, bool overwrite);

/// Rows (model, dataset, condition, layer, metric, mean, se, n_partitions).
/// Throws ValidationError on a repeated key or a non-finite value.
Table profiles_to_table(const std::vector<LayerProfile>& profiles, nlohmann::json meta);
std::vector<LayerProfile> table_to_profiles(const Table& t);

}  // namespace lingdim::io

#endif  // LINGDIM_IO_REPORT_HPP
