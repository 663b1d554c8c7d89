#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "cove/core/types.hpp"

namespace cove {

struct LineDiagnostic {
    size_t line = 0;  // 1-based
    std::string message;
};

struct ParsedInstances {
    std::vector<Instance> instances;
    std::vector<LineDiagnostic> diagnostics;
};

/// Reads one JSON object per line. Invalid lines produce diagnostics and are
/// skipped; the rest keep their order. Relative image paths resolve against
/// `base_dir` when it is nonempty. Blank lines are ignored.
ParsedInstances parse_instances(std::istream& in, const std::filesystem::path& base_dir = {});
ParsedInstances load_instances(const std::filesystem::path& file);

std::string serialize_instance(const Instance& inst);

/// Decides whether an image reference can be read. Only probes; never decodes pixels.
class ImageProbe {
public:
    virtual ~ImageProbe() = default;
    virtual bool readable(const ImageRef& ref) const = 0;
};

/// Accepts local files and inline payloads that start with a PNG, JPEG, GIF,
/// BMP, WebP or TIFF signature. URLs are assumed readable.
class SignatureProbe final : public ImageProbe {
public:
    bool readable(const ImageRef& ref) const override;
};

struct ValidationReport {
    std::vector<std::string> hard_failures;
    std::vector<std::string> soft_flags;
    bool valid() const { return hard_failures.empty(); }
};

ValidationReport validate_instance(const Instance& inst, const ImageProbe& probe);

}  // namespace cove
