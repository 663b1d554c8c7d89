#include "cove/core/instance_io.hpp"

#include <array>
#include <fstream>
#include <unordered_set>

#include "cove/core/errors.hpp"
#include "cove/core/text.hpp"

namespace cove {

ParsedInstances parse_instances(std::istream& in, const std::filesystem::path& base_dir) {
    ParsedInstances out;
    std::unordered_set<std::string> ids;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        try {
            Json j = Json::parse(line);
            Instance inst = j.get<Instance>();
            if (!ids.insert(inst.id).second) throw ParseError("duplicate id '" + inst.id + "'");
            if (inst.image.kind == ImageRef::Kind::Path && !base_dir.empty()) {
                std::filesystem::path p(inst.image.value);
                if (p.is_relative()) inst.image.value = (base_dir / p).lexically_normal().string();
            }
            out.instances.push_back(std::move(inst));
        } catch (const Json::exception& e) {
            out.diagnostics.push_back({lineno, std::string("malformed record: ") + e.what()});
        } catch (const Error& e) {
            out.diagnostics.push_back({lineno, e.what()});
        }
    }
    return out;
}

ParsedInstances load_instances(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ParseError("cannot read " + file.string());
    return parse_instances(in, file.parent_path());
}

std::string serialize_instance(const Instance& inst) { return Json(inst).dump(); }

namespace {

bool has_image_signature(std::string_view head) {
    static const std::array<std::string_view, 7> sigs = {
        std::string_view("\x89PNG\r\n\x1a\n", 8), std::string_view("\xFF\xD8\xFF", 3),
        std::string_view("GIF87a", 6),           std::string_view("GIF89a", 6),
        std::string_view("BM", 2),               std::string_view("II*\0", 4),
        std::string_view("MM\0*", 4)};
    for (auto s : sigs)
        if (head.substr(0, s.size()) == s) return true;
    return head.size() >= 12 && head.substr(0, 4) == "RIFF" && head.substr(8, 4) == "WEBP";
}

}  // namespace

bool SignatureProbe::readable(const ImageRef& ref) const {
    switch (ref.kind) {
        case ImageRef::Kind::Url: return true;
        case ImageRef::Kind::Bytes: return has_image_signature(ref.value);
        case ImageRef::Kind::Path: {
            std::ifstream in(ref.value, std::ios::binary);
            if (!in) return false;
            std::string head(16, '\0');
            in.read(head.data(), static_cast<std::streamsize>(head.size()));
            head.resize(static_cast<size_t>(in.gcount()));
            return has_image_signature(head);
        }
    }
    return false;
}

ValidationReport validate_instance(const Instance& inst, const ImageProbe& probe) {
    ValidationReport report;
    if (!probe.readable(inst.image)) report.hard_failures.emplace_back("image unreadable");
    if (inst.composite) report.soft_flags.emplace_back("composite - out of scope");
    return report;
}

}  // namespace cove
