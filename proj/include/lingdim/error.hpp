#ifndef LINGDIM_ERROR_HPP
#define LINGDIM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lingdim {

/// Base of every error the library raises. `kind()` is a stable,
/// machine-readable tag used by the CLI error records.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define LINGDIM_DEFINE_ERROR(Name, tag)                                  \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& message) : Error(tag, message) {}   \
  }

LINGDIM_DEFINE_ERROR(ValidationError, "validation");
LINGDIM_DEFINE_ERROR(EstimatorInputError, "estimator_input");
LINGDIM_DEFINE_ERROR(DegenerateGeometryError, "degenerate_geometry");
LINGDIM_DEFINE_ERROR(PairingError, "pairing");
LINGDIM_DEFINE_ERROR(ParameterError, "parameter");
LINGDIM_DEFINE_ERROR(AlignmentError, "alignment");
LINGDIM_DEFINE_ERROR(LoadError, "load");
LINGDIM_DEFINE_ERROR(GenerationError, "generation");
LINGDIM_DEFINE_ERROR(UndefinedStatisticError, "undefined_statistic");
LINGDIM_DEFINE_ERROR(DegenerateSampleError, "degenerate_sample");
LINGDIM_DEFINE_ERROR(IoError, "io");

// Dump-format faults, each distinguishable by type and by kind().
LINGDIM_DEFINE_ERROR(BadMagicError, "bad_magic");
LINGDIM_DEFINE_ERROR(TruncatedPayloadError, "truncated_payload");
LINGDIM_DEFINE_ERROR(HeaderMismatchError, "header_mismatch");

#undef LINGDIM_DEFINE_ERROR

/// A metric failure inside a profile computation, tagged with the layer and
/// partition that produced it.
class MetricError : public Error {
 public:
  MetricError(const Error& inner, int layer, int partition)
      : Error(inner.kind(), "layer " + std::to_string(layer) + ", partition " +
                                std::to_string(partition) + ": " + inner.what()),
        layer_(layer),
        partition_(partition) {}

  int layer() const noexcept { return layer_; }
  int partition() const noexcept { return partition_; }

 private:
  int layer_;
  int partition_;
};

}  // namespace lingdim

#endif  // LINGDIM_ERROR_HPP
