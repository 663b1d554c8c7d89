#include "cove/core/types.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "cove/core/errors.hpp"
#include "cove/core/text.hpp"

namespace cove {

namespace {

constexpr std::array<std::string_view, 7> kItemNames = {
    "source", "date", "location", "motivation", "people", "things", "event"};

std::vector<std::string> split_people_tokens(std::string_view s) {
    // Normalize the word separator " and " to ','.
    std::string buf(s);
    std::string lowered = text::to_lower_ascii(buf);
    std::string out;
    for (size_t i = 0; i < buf.size();) {
        if (lowered.compare(i, 5, " and ") == 0) {
            out.push_back(',');
            i += 5;
            continue;
        }
        const char c = buf[i];
        out.push_back((c == ';' || c == '&' || c == '\n' || c == '\r') ? ',' : c);
        ++i;
    }
    std::vector<std::string> parts;
    size_t start = 0;
    for (size_t i = 0; i <= out.size(); ++i) {
        if (i == out.size() || out[i] == ',') {
            std::string part = text::collapse_whitespace(out.substr(start, i - start));
            while (!part.empty() && (part.back() == '.' || part.back() == ' ')) part.pop_back();
            if (!part.empty()) parts.push_back(std::move(part));
            start = i + 1;
        }
    }
    return parts;
}

}  // namespace

std::string_view item_name(ContextItemKind k) { return kItemNames[index_of(k)]; }

std::optional<ContextItemKind> item_from_name(std::string_view name) {
    const std::string n = text::to_lower_ascii(text::trim(name));
    for (auto k : kAllItemKinds) {
        if (item_name(k) == n) return k;
    }
    if (n == "object" || n == "objects") return ContextItemKind::Things;
    return std::nullopt;
}

std::vector<std::string> parse_people(std::string_view answer) {
    std::vector<std::string> names;
    std::unordered_set<std::string> seen;
    for (auto& part : split_people_tokens(answer)) {
        if (seen.insert(text::loose_key(part)).second) names.push_back(std::move(part));
    }
    return names;
}

size_t ContextSummary::known_count() const {
    return static_cast<size_t>(
        std::count_if(items_.begin(), items_.end(), [](const ContextItem& i) { return i.known(); }));
}

void ContextSummary::set(ContextItemKind k, std::string_view value,
                         std::vector<std::string> provenance) {
    if (k == ContextItemKind::People) {
        set_people(parse_people(value), std::move(provenance));
        return;
    }
    std::string v = text::collapse_whitespace(value);
    auto& item = items_[index_of(k)];
    if (v.empty()) {
        item = ContextItem{};
        return;
    }
    item.value = std::move(v);
    item.names.clear();
    item.provenance = std::move(provenance);
}

void ContextSummary::set_people(std::vector<std::string> names,
                                std::vector<std::string> provenance) {
    auto& item = items_[index_of(ContextItemKind::People)];
    std::vector<std::string> distinct;
    std::unordered_set<std::string> seen;
    for (auto& n : names) {
        std::string clean = text::collapse_whitespace(n);
        if (!clean.empty() && seen.insert(text::loose_key(clean)).second)
            distinct.push_back(std::move(clean));
    }
    if (distinct.empty()) {
        item = ContextItem{};
        return;
    }
    item.value = text::join(distinct, ", ");
    item.names = std::move(distinct);
    item.provenance = std::move(provenance);
}

// ---------------------------------------------------------------------------

std::string_view label_name(VeracityLabel l) {
    return l == VeracityLabel::Accurate ? "accurate" : "ooc";
}

std::optional<VeracityLabel> label_from_name(std::string_view s) {
    const std::string n = text::to_lower_ascii(text::trim(s));
    if (n == "accurate" || n == "true" || n == "1") return VeracityLabel::Accurate;
    if (n == "ooc" || n == "out-of-context" || n == "out of context" || n == "false" || n == "0")
        return VeracityLabel::OOC;
    return std::nullopt;
}

namespace {
constexpr std::array<std::string_view, 4> kStageNames = {"rule_exact_match", "rule_image_match",
                                                         "rule_non_match_ooc", "model"};
constexpr std::array<std::string_view, 5> kRawNames = {"accurate", "lean_accurate", "unknown",
                                                       "lean_ooc", "ooc"};
}  // namespace

std::string_view stage_name(VerdictStage s) { return kStageNames[static_cast<size_t>(s)]; }

std::optional<VerdictStage> stage_from_name(std::string_view s) {
    for (size_t i = 0; i < kStageNames.size(); ++i)
        if (kStageNames[i] == s) return static_cast<VerdictStage>(i);
    return std::nullopt;
}

std::string_view raw_name(RawLabel r) { return kRawNames[static_cast<size_t>(r)]; }

std::optional<RawLabel> raw_from_name(std::string_view s) {
    for (size_t i = 0; i < kRawNames.size(); ++i)
        if (kRawNames[i] == s) return static_cast<RawLabel>(i);
    return std::nullopt;
}

VeracityVerdict VeracityVerdict::from_rule(VerdictStage stage, VeracityLabel label) {
    VeracityVerdict v;
    v.stage = stage;
    v.label = label;
    v.raw = label == VeracityLabel::Accurate ? RawLabel::Accurate : RawLabel::OOC;
    v.check();
    return v;
}

VeracityVerdict VeracityVerdict::from_model(RawLabel raw, VeracityLabel label,
                                            std::string explanation) {
    VeracityVerdict v;
    v.stage = VerdictStage::Model;
    v.raw = raw;
    v.label = label;
    v.explanation = std::move(explanation);
    v.check();
    return v;
}

void VeracityVerdict::check() const {
    if (stage != VerdictStage::Model) {
        if (raw != RawLabel::Accurate && raw != RawLabel::OOC)
            throw PreconditionError("rule verdict must carry a definite raw label");
        if (!explanation.empty()) throw PreconditionError("rule verdict carries no explanation");
    }
    if ((raw == RawLabel::Accurate || raw == RawLabel::LeanAccurate) &&
        label != VeracityLabel::Accurate)
        throw PreconditionError("raw label leans accurate but label is OOC");
    if ((raw == RawLabel::OOC || raw == RawLabel::LeanOOC) && label != VeracityLabel::OOC)
        throw PreconditionError("raw label leans OOC but label is accurate");
}

// ---------------------------------------------------------------------------

ImageRef ImageRef::parse(std::string s) {
    if (s.find("://") != std::string::npos) return url(std::move(s));
    return path(std::move(s));
}

std::string ImageRef::identity() const {
    switch (kind) {
        case Kind::Path: return "path:" + value;
        case Kind::Url: return "url:" + value;
        case Kind::Bytes: {
            unsigned char md[EVP_MAX_MD_SIZE];
            unsigned int len = 0;
            EVP_Digest(value.data(), value.size(), md, &len, EVP_sha256(), nullptr);
            static constexpr char hex[] = "0123456789abcdef";
            std::string out = "sha256:";
            for (unsigned i = 0; i < len; ++i) {
                out.push_back(hex[md[i] >> 4]);
                out.push_back(hex[md[i] & 0xF]);
            }
            return out;
        }
    }
    return value;
}

std::string base64_encode(std::string_view bytes) {
    std::string out(4 * ((bytes.size() + 2) / 3), '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                  reinterpret_cast<const unsigned char*>(bytes.data()),
                                  static_cast<int>(bytes.size()));
    out.resize(static_cast<size_t>(n));
    return out;
}

std::string base64_decode(std::string_view text) {
    std::string clean;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) clean.push_back(c);
    if (clean.size() % 4 != 0) throw ParseError("invalid base64 length");
    std::string out(3 * clean.size() / 4, '\0');
    const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                  reinterpret_cast<const unsigned char*>(clean.data()),
                                  static_cast<int>(clean.size()));
    if (n < 0) throw ParseError("invalid base64 payload");
    size_t pad = 0;
    if (!clean.empty() && clean.back() == '=') ++pad;
    if (clean.size() > 1 && clean[clean.size() - 2] == '=') ++pad;
    out.resize(static_cast<size_t>(n) - pad);
    return out;
}

// ---------------------------------------------------------------------------
// JSON

void to_json(Json& j, const ContextSummary& c) {
    j = Json::object();
    for (auto k : kAllItemKinds) {
        const auto& item = c.item(k);
        Json e = Json::object();
        e["value"] = item.value ? Json(*item.value) : Json(nullptr);
        e["provenance"] = item.provenance;
        if (k == ContextItemKind::People) e["names"] = item.names;
        j[std::string(item_name(k))] = std::move(e);
    }
}

void from_json(const Json& j, ContextSummary& c) {
    if (!j.is_object()) throw ParseError("context must be an object");
    c = ContextSummary{};
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto kind = item_from_name(it.key());
        if (!kind) throw ParseError("unknown context item '" + it.key() + "'");
        const Json& v = it.value();
        if (v.is_null()) continue;
        if (v.is_string()) {
            c.set(*kind, v.get<std::string>());
        } else if (v.is_array()) {
            std::vector<std::string> parts = v.get<std::vector<std::string>>();
            if (*kind == ContextItemKind::People)
                c.set_people(parts);
            else
                c.set(*kind, text::join(parts, ", "));
        } else if (v.is_object()) {
            std::vector<std::string> prov =
                v.value("provenance", Json::array()).get<std::vector<std::string>>();
            if (*kind == ContextItemKind::People && v.contains("names") &&
                !v["names"].empty()) {
                c.set_people(v["names"].get<std::vector<std::string>>(), std::move(prov));
            } else if (v.contains("value") && v["value"].is_string()) {
                c.set(*kind, v["value"].get<std::string>(), std::move(prov));
            }
        } else {
            throw ParseError("context item '" + it.key() + "' has unsupported type");
        }
    }
}

void to_json(Json& j, const VeracityVerdict& v) {
    j = Json{{"label", label_name(v.label)},
             {"stage", stage_name(v.stage)},
             {"raw", raw_name(v.raw)},
             {"explanation", v.explanation}};
}

void from_json(const Json& j, VeracityVerdict& v) {
    auto label = label_from_name(j.at("label").get<std::string>());
    auto stage = stage_from_name(j.at("stage").get<std::string>());
    auto raw = raw_from_name(j.at("raw").get<std::string>());
    if (!label || !stage || !raw) throw ParseError("invalid verdict record");
    v.label = *label;
    v.stage = *stage;
    v.raw = *raw;
    v.explanation = j.value("explanation", "");
    v.check();
}

void to_json(Json& j, const ImageRef& r) {
    if (r.kind == ImageRef::Kind::Bytes)
        j = Json{{"bytes_b64", base64_encode(r.value)}};
    else
        j = r.value;
}

void from_json(const Json& j, ImageRef& r) {
    if (j.is_string()) {
        r = ImageRef::parse(j.get<std::string>());
    } else if (j.is_object() && j.contains("bytes_b64")) {
        r = ImageRef::bytes(base64_decode(j.at("bytes_b64").get<std::string>()));
    } else if (j.is_object() && j.contains("path")) {
        r = ImageRef::path(j.at("path").get<std::string>());
    } else if (j.is_object() && j.contains("url")) {
        r = ImageRef::url(j.at("url").get<std::string>());
    } else {
        throw ParseError("image must be a string or {bytes_b64|path|url}");
    }
}

void to_json(Json& j, const Instance& i) {
    j = Json{{"id", i.id}, {"image", i.image}, {"caption", i.caption}};
    if (i.gold_label) j["gold_label"] = label_name(*i.gold_label);
    if (i.gold_context) j["gold_context"] = *i.gold_context;
    if (i.language_hint) j["language_hint"] = *i.language_hint;
    if (i.composite) j["composite"] = true;
}

void from_json(const Json& j, Instance& i) {
    if (!j.is_object()) throw ParseError("record is not an object");
    if (!j.contains("id") || !j["id"].is_string()) throw ParseError("missing id");
    if (!j.contains("image")) throw ParseError("missing image");
    if (!j.contains("caption") || !j["caption"].is_string()) throw ParseError("missing caption");
    i = Instance{};
    i.id = j["id"].get<std::string>();
    if (text::trim(i.id).empty()) throw ParseError("empty id");
    i.image = j["image"].get<ImageRef>();
    i.caption = j["caption"].get<std::string>();
    if (text::collapse_whitespace(i.caption).empty()) throw ParseError("empty caption");
    if (j.contains("gold_label") && !j["gold_label"].is_null()) {
        auto l = label_from_name(j["gold_label"].get<std::string>());
        if (!l) throw ParseError("invalid gold_label");
        i.gold_label = *l;
    }
    if (j.contains("gold_context") && !j["gold_context"].is_null())
        i.gold_context = j["gold_context"].get<ContextSummary>();
    if (j.contains("language_hint") && j["language_hint"].is_string())
        i.language_hint = j["language_hint"].get<std::string>();
    i.composite = j.value("composite", false);
}

}  // namespace cove
