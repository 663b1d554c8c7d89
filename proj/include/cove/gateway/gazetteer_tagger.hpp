#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "cove/gateway/gateway.hpp"

namespace cove::gateway {

/// Deterministic named-entity tagger backed by a surface-form list.
///
/// Entries are "surface<TAB>LABEL" lines; '#' starts a comment. Matching is
/// case-sensitive, leftmost-longest, on word boundaries. Month/year
/// expressions are tagged DATE without needing entries.
class GazetteerTagger {
public:
    GazetteerTagger() = default;

    static GazetteerTagger load(const std::filesystem::path& file);
    static GazetteerTagger parse(std::istream& in);

    void add(std::string surface, std::string label);
    size_t size() const { return entries_.size(); }

    std::vector<NamedEntity> tag(const std::string& text) const;

    /// Handler for Gateway::set_local_handler(ProviderKind::NamedEntityTagging, ...).
    LocalHandler handler() const;

private:
    struct Entry {
        std::string surface;
        std::string label;
    };
    std::vector<Entry> entries_;
};

}  // namespace cove::gateway
