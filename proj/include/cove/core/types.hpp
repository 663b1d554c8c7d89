#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace cove {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Context items
// ---------------------------------------------------------------------------

enum class ContextItemKind { Source, Date, Location, Motivation, People, Things, Event };

inline constexpr std::array<ContextItemKind, 7> kAllItemKinds = {
    ContextItemKind::Source, ContextItemKind::Date,   ContextItemKind::Location,
    ContextItemKind::Motivation, ContextItemKind::People, ContextItemKind::Things,
    ContextItemKind::Event};

inline constexpr size_t index_of(ContextItemKind k) { return static_cast<size_t>(k); }

/// Lower-case item name ("source", "date", ...).
std::string_view item_name(ContextItemKind k);
std::optional<ContextItemKind> item_from_name(std::string_view name);

/// Splits a People answer into distinct names. Separators: ',', ';', '&',
/// newlines and the word "and". Duplicates (case-insensitive) collapse.
std::vector<std::string> parse_people(std::string_view answer);

struct ContextItem {
    std::optional<std::string> value;
    /// Distinct person names; only populated for People.
    std::vector<std::string> names;
    /// Evidence identifiers that supported the answer.
    std::vector<std::string> provenance;

    bool known() const { return value.has_value(); }
    bool operator==(const ContextItem&) const = default;
};

/// Seven fixed item slots; an item is either Unknown or carries nonempty text.
class ContextSummary {
public:
    ContextSummary() = default;

    const ContextItem& item(ContextItemKind k) const { return items_[index_of(k)]; }
    bool known(ContextItemKind k) const { return item(k).known(); }
    size_t known_count() const;

    /// Sets an item. Blank text makes it Unknown. People text is split into names.
    void set(ContextItemKind k, std::string_view value, std::vector<std::string> provenance = {});
    /// Sets People from an explicit name set.
    void set_people(std::vector<std::string> names, std::vector<std::string> provenance = {});
    void clear(ContextItemKind k) { items_[index_of(k)] = ContextItem{}; }

    const std::array<ContextItem, 7>& items() const { return items_; }
    bool operator==(const ContextSummary&) const = default;

private:
    std::array<ContextItem, 7> items_{};
};

// ---------------------------------------------------------------------------
// Veracity
// ---------------------------------------------------------------------------

enum class VeracityLabel { Accurate, OOC };
enum class VerdictStage { RuleExactMatch, RuleImageMatch, RuleNonMatchOOC, Model };
enum class RawLabel { Accurate, LeanAccurate, Unknown, LeanOOC, OOC };

std::string_view label_name(VeracityLabel l);
std::optional<VeracityLabel> label_from_name(std::string_view s);
std::string_view stage_name(VerdictStage s);
std::optional<VerdictStage> stage_from_name(std::string_view s);
std::string_view raw_name(RawLabel r);
std::optional<RawLabel> raw_from_name(std::string_view s);

struct VeracityVerdict {
    VeracityLabel label = VeracityLabel::OOC;
    VerdictStage stage = VerdictStage::Model;
    RawLabel raw = RawLabel::Unknown;
    std::string explanation;

    static VeracityVerdict from_rule(VerdictStage stage, VeracityLabel label);
    static VeracityVerdict from_model(RawLabel raw, VeracityLabel label, std::string explanation);

    /// Throws PreconditionError when the stage/raw/label combination is invalid.
    void check() const;
    bool operator==(const VeracityVerdict&) const = default;
};

// ---------------------------------------------------------------------------
// Instances
// ---------------------------------------------------------------------------

/// Opaque reference to an image: a local path, a URL, or an inline payload.
struct ImageRef {
    enum class Kind { Path, Url, Bytes };
    Kind kind = Kind::Path;
    std::string value;

    static ImageRef path(std::string p) { return {Kind::Path, std::move(p)}; }
    static ImageRef url(std::string u) { return {Kind::Url, std::move(u)}; }
    static ImageRef bytes(std::string b) { return {Kind::Bytes, std::move(b)}; }
    /// Strings with a scheme ("http://", "fixture://") become URLs, others paths.
    static ImageRef parse(std::string s);

    /// Stable identity used inside provider requests.
    std::string identity() const;
    bool operator==(const ImageRef&) const = default;
};

struct Instance {
    std::string id;
    ImageRef image;
    std::string caption;
    std::optional<VeracityLabel> gold_label;
    std::optional<ContextSummary> gold_context;
    std::optional<std::string> language_hint;
    /// User-supplied flag for collage images.
    bool composite = false;

    bool operator==(const Instance&) const = default;
};

// JSON mapping (stable field names).
void to_json(Json& j, const ContextSummary& c);
void from_json(const Json& j, ContextSummary& c);
void to_json(Json& j, const VeracityVerdict& v);
void from_json(const Json& j, VeracityVerdict& v);
void to_json(Json& j, const ImageRef& r);
void from_json(const Json& j, ImageRef& r);
void to_json(Json& j, const Instance& i);
void from_json(const Json& j, Instance& i);

std::string base64_encode(std::string_view bytes);
std::string base64_decode(std::string_view text);

}  // namespace cove
