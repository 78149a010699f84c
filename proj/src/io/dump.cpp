#include "lingdim/io/dump.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

#include "lingdim/io/files.hpp"

namespace lingdim::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

std::uint32_t byteswap32(std::uint32_t v) {
  return ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
}

void put_u32_le(std::string& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xFFu));
}

std::uint32_t get_u32_le(const char* p) {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[k])) << (8 * k);
  return v;
}

template <typename T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw HeaderMismatchError(std::string("dump header is missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw HeaderMismatchError(std::string("dump header field '") + key + "': " + e.what());
  }
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' || c == '_';
    out.push_back(ok ? c : '-');
  }
  return out.empty() ? "none" : out;
}

}  // namespace

json DumpHeader::to_json() const {
  json j;
  j["format_version"] = format_version;
  j["model_id"] = model_id;
  j["layer_index"] = layer_index;
  j["dataset_id"] = dataset_id;
  j["condition"] = condition;
  j["ablated_layer"] = ablated_layer ? json(*ablated_layer) : json(nullptr);
  j["n_points"] = n_points;
  j["ambient_dim"] = ambient_dim;
  j["dtype"] = dtype;
  j["labels"] = labels;
  j["metadata"] = metadata;
  return j;
}

DumpHeader DumpHeader::from_json(const json& j) {
  if (!j.is_object()) throw HeaderMismatchError("dump header is not a JSON object");
  DumpHeader h;
  h.format_version = required<int>(j, "format_version");
  h.model_id = required<std::string>(j, "model_id");
  h.layer_index = required<int>(j, "layer_index");
  h.dataset_id = required<std::string>(j, "dataset_id");
  h.condition = required<std::string>(j, "condition");
  if (j.contains("ablated_layer") && !j["ablated_layer"].is_null()) {
    h.ablated_layer = required<int>(j, "ablated_layer");
  }
  h.n_points = required<std::int64_t>(j, "n_points");
  h.ambient_dim = required<std::int64_t>(j, "ambient_dim");
  h.dtype = required<std::string>(j, "dtype");
  h.labels = required<std::vector<std::string>>(j, "labels");
  if (j.contains("metadata")) h.metadata = j["metadata"];
  if (h.format_version != kDumpFormatVersion) {
    throw HeaderMismatchError("unsupported dump format_version " + std::to_string(h.format_version));
  }
  if (h.dtype != "float32") throw HeaderMismatchError("unsupported dtype '" + h.dtype + "'");
  if (h.n_points < 0 || h.ambient_dim < 0) throw HeaderMismatchError("negative dump shape");
  return h;
}

void TensorDump::check() const {
  if (payload.rows() != header.n_points || payload.cols() != header.ambient_dim) {
    throw HeaderMismatchError("payload shape " + std::to_string(payload.rows()) + "x" +
                              std::to_string(payload.cols()) + " does not match header " +
                              std::to_string(header.n_points) + "x" + std::to_string(header.ambient_dim));
  }
  if (static_cast<std::int64_t>(header.labels.size()) != header.n_points) {
    throw HeaderMismatchError("header lists " + std::to_string(header.labels.size()) + " labels for " +
                              std::to_string(header.n_points) + " rows");
  }
  std::vector<std::string> sorted = header.labels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw HeaderMismatchError("dump labels are not unique");
  }
}

std::string encode_dump(const TensorDump& dump) {
  dump.check();
  const std::string header = dump.header.to_json().dump();
  if (header.size() > UINT32_MAX) throw HeaderMismatchError("dump header too large");
  std::string out;
  const auto n_values = static_cast<std::size_t>(dump.payload.size());
  out.reserve(12 + header.size() + 4 * n_values);
  out.append(kDumpMagic, 8);
  put_u32_le(out, static_cast<std::uint32_t>(header.size()));
  out += header;
  const std::size_t offset = out.size();
  out.resize(offset + 4 * n_values);
  std::memcpy(out.data() + offset, dump.payload.data(), 4 * n_values);
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t k = 0; k < n_values; ++k) {
      std::uint32_t v;
      std::memcpy(&v, out.data() + offset + 4 * k, 4);
      v = byteswap32(v);
      std::memcpy(out.data() + offset + 4 * k, &v, 4);
    }
  }
  return out;
}

TensorDump decode_dump(const std::string& bytes, const std::string& origin) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kDumpMagic, 8) != 0) {
    throw BadMagicError(origin + ": not a GMDP0001 dump (magic mismatch)");
  }
  if (bytes.size() < 12) throw TruncatedPayloadError(origin + ": file ends inside the header length");
  const std::uint32_t header_len = get_u32_le(bytes.data() + 8);
  if (bytes.size() < 12 + static_cast<std::size_t>(header_len)) {
    throw TruncatedPayloadError(origin + ": file ends inside the header");
  }
  json j;
  try {
    j = json::parse(bytes.begin() + 12, bytes.begin() + 12 + header_len);
  } catch (const json::exception& e) {
    throw HeaderMismatchError(origin + ": unreadable header: " + e.what());
  }
  TensorDump dump;
  dump.header = DumpHeader::from_json(j);
  const std::size_t offset = 12 + header_len;
  const auto expected = static_cast<std::size_t>(dump.header.n_points) *
                        static_cast<std::size_t>(dump.header.ambient_dim) * 4;
  const std::size_t available = bytes.size() - offset;
  if (available < expected) {
    throw TruncatedPayloadError(origin + ": payload has " + std::to_string(available) + " bytes, header implies " +
                                std::to_string(expected));
  }
  if (available > expected) {
    throw HeaderMismatchError(origin + ": " + std::to_string(available - expected) +
                              " trailing bytes after the payload");
  }
  dump.payload.resize(dump.header.n_points, dump.header.ambient_dim);
  std::memcpy(dump.payload.data(), bytes.data() + offset, expected);
  if constexpr (std::endian::native == std::endian::big) {
    auto* words = reinterpret_cast<std::uint32_t*>(dump.payload.data());
    for (std::size_t k = 0; k < expected / 4; ++k) words[k] = byteswap32(words[k]);
  }
  dump.check();
  return dump;
}

void write_dump(const fs::path& path, const TensorDump& dump, bool overwrite) {
  write_file_atomic(path, encode_dump(dump), overwrite);
}

TensorDump read_dump(const fs::path& path) { return decode_dump(read_file(path), path.string()); }

DumpHeader read_dump_header(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char prefix[12] = {};
  in.read(prefix, 12);
  const auto got = static_cast<std::size_t>(in.gcount());
  if (got < 8 || std::memcmp(prefix, kDumpMagic, 8) != 0) {
    throw BadMagicError(path.string() + ": not a GMDP0001 dump (magic mismatch)");
  }
  if (got < 12) throw TruncatedPayloadError(path.string() + ": file ends inside the header length");
  std::string header(get_u32_le(prefix + 8), '\0');
  in.read(header.data(), static_cast<std::streamsize>(header.size()));
  if (static_cast<std::size_t>(in.gcount()) != header.size()) {
    throw TruncatedPayloadError(path.string() + ": file ends inside the header");
  }
  try {
    return DumpHeader::from_json(json::parse(header));
  } catch (const json::exception& e) {
    throw HeaderMismatchError(path.string() + ": unreadable header: " + e.what());
  }
}

std::string dump_filename(const DumpHeader& h) {
  char layer[16];
  std::snprintf(layer, sizeof layer, "L%03d", h.layer_index);
  std::string name = sanitize(h.model_id) + "__" + sanitize(h.dataset_id) + "__" + sanitize(h.condition) + "__" + layer;
  if (h.ablated_layer) {
    char abl[16];
    std::snprintf(abl, sizeof abl, "__A%03d", *h.ablated_layer);
    name += abl;
  }
  return name + kDumpExtension;
}

std::map<CellKey, std::vector<LayerCloud<float>>> load_dump_set(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == kDumpExtension) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no " + std::string(kDumpExtension) + " files under " + dir.string());

  std::map<CellKey, std::vector<LayerCloud<float>>> out;
  for (const auto& f : files) {
    TensorDump d = read_dump(f);
    const CellKey key{d.header.model_id, d.header.dataset_id, d.header.condition, d.header.ablated_layer.value_or(-1)};
    auto& layers = out[key];
    for (const auto& l : layers) {
      if (l.layer == d.header.layer_index) {
        throw AlignmentError("two dumps for layer " + std::to_string(l.layer) + " of the same cell (" + f.string() + ")");
      }
    }
    layers.push_back({d.header.layer_index, d.to_cloud()});
  }
  for (auto& [key, layers] : out) {
    std::sort(layers.begin(), layers.end(), [](const auto& a, const auto& b) { return a.layer < b.layer; });
  }
  return out;
}

}  // namespace lingdim::io
