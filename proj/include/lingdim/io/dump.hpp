#ifndef LINGDIM_IO_DUMP_HPP
#define LINGDIM_IO_DUMP_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "lingdim/geometry/point_cloud.hpp"
#include "lingdim/profile/profile.hpp"

namespace lingdim::io {

// On-disk layout:
//   bytes 0..7   magic "GMDP0001"
//   bytes 8..11  header length H, little-endian uint32
//   next H bytes UTF-8 JSON header (keys sorted, compact)
//   rest         N * D little-endian IEEE-754 float32, row-major
inline constexpr char kDumpMagic[8] = {'G', 'M', 'D', 'P', '0', '0', '0', '1'};
inline constexpr int kDumpFormatVersion = 1;
inline constexpr const char* kDumpExtension = ".gmdp";

struct DumpHeader {
  int format_version = kDumpFormatVersion;
  std::string model_id;
  int layer_index = 0;
  std::string dataset_id;
  std::string condition;
  std::optional<int> ablated_layer;
  std::int64_t n_points = 0;
  std::int64_t ambient_dim = 0;
  std::string dtype = "float32";
  std::vector<std::string> labels;
  /// Free-form producer metadata (precision, BOS handling, invocation...).
  nlohmann::json metadata = nlohmann::json::object();

  nlohmann::json to_json() const;
  static DumpHeader from_json(const nlohmann::json& j);

  bool operator==(const DumpHeader&) const = default;
};

struct TensorDump {
  DumpHeader header;
  RowMatrixXf payload;

  /// Header/payload consistency; throws HeaderMismatchError.
  void check() const;
  PointCloudf to_cloud() const { return PointCloudf(payload, header.labels); }
};

/// Serialised bytes of a dump.
std::string encode_dump(const TensorDump& dump);
TensorDump decode_dump(const std::string& bytes, const std::string& origin = "<memory>");

/// Writes atomically (temp file + rename). Refuses to replace an existing
/// file unless `overwrite`.
void write_dump(const std::filesystem::path& path, const TensorDump& dump, bool overwrite = false);
TensorDump read_dump(const std::filesystem::path& path);
DumpHeader read_dump_header(const std::filesystem::path& path);

/// Canonical file name: <model>__<dataset>__<condition>__L<layer>[__A<ablated>].gmdp
std::string dump_filename(const DumpHeader& header);

/// (model, dataset, condition, ablated layer or -1)
using CellKey = std::tuple<std::string, std::string, std::string, int>;

/// All *.gmdp files under `dir`, grouped by cell and sorted by layer.
std::map<CellKey, std::vector<LayerCloud<float>>> load_dump_set(const std::filesystem::path& dir);

}  // namespace lingdim::io

#endif  // LINGDIM_IO_DUMP_HPP
