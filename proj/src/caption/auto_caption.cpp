#include "cove/caption/auto_caption.hpp"

#include <algorithm>

#include "cove/core/text.hpp"

namespace cove::caption {

namespace {

struct CategoryRow {
    ObjectCategory category;
    std::vector<std::string_view> labels;
    std::string_view prompt;
};

const std::vector<CategoryRow>& category_table() {
    static const std::vector<CategoryRow> rows = {
        {ObjectCategory::People, {"Person"}, "Who is shown in the image?"},
        {ObjectCategory::Animals, {"Animal", "Bird", "Cat", "Dog", "Fish"}, "Which {} species is shown in this image?"},
        {ObjectCategory::Buildings,
         {"Building", "Stadium", "Bridge", "Castle"},
         "Which {} is shown in this image? Provide a location if possible."},
        {ObjectCategory::Flags, {"Flag"}, "Which flag is shown in this image?"},
        {ObjectCategory::Food, {"Food", "Drink", "Fruit"}, "Which {} is shown in this image?"},
        {ObjectCategory::Sports,
         {"Basketball", "Baseball bat", "Baseball glove", "Football", "Rugby ball"},
         "What are the teams playing in this game?"},
        {ObjectCategory::Transports,
         {"Airplane", "Boat", "Bus", "Car", "Helicopter", "Motorcycle", "Ship", "Tank", "Train", "Truck", "Van"},
         "Which {} model is shown in this image?"},
        {ObjectCategory::Weapons, {"Weapon"}, "Which weapon model is shown in this image?"},
    };
    return rows;
}

std::string substitute(std::string_view tmpl, const std::string& label) {
    std::string out(tmpl);
    if (auto pos = out.find("{}"); pos != std::string::npos) out.replace(pos, 2, label);
    return out;
}

}  // namespace

std::string_view category_name(ObjectCategory c) {
    switch (c) {
        case ObjectCategory::General: return "general";
        case ObjectCategory::People: return "people";
        case ObjectCategory::Animals: return "animals";
        case ObjectCategory::Buildings: return "buildings";
        case ObjectCategory::Flags: return "flags";
        case ObjectCategory::Food: return "food";
        case ObjectCategory::Sports: return "sports";
        case ObjectCategory::Transports: return "transports";
        case ObjectCategory::Weapons: return "weapons";
    }
    return "general";
}

std::string general_prompt() {
    return "Answer in one to three sentences: what are the people, objects, animals, events, texts shown in the image?";
}

std::string people_prompt() { return "Who is shown in the image?"; }

std::optional<CategorizedObject> categorize_object(const std::string& label) {
    const std::string key = text::loose_key(label);
    for (const auto& row : category_table())
        for (auto l : row.labels)
            if (text::loose_key(l) == key) return CategorizedObject{row.category, substitute(row.prompt, label)};
    return std::nullopt;
}

std::optional<gateway::BBox> crop_rectangle(const gateway::BBox& b) {
    const double x0 = std::clamp(b.x, 0.0, 1.0), y0 = std::clamp(b.y, 0.0, 1.0);
    const double x1 = std::clamp(b.x + b.w, 0.0, 1.0), y1 = std::clamp(b.y + b.h, 0.0, 1.0);
    if (!(x1 > x0) || !(y1 > y0)) return std::nullopt;
    return gateway::BBox{x0, y0, x1 - x0, y1 - y0};
}

AutoCaptions generate_automated_captions(gateway::Providers& providers, const ImageRef& image,
                                         const std::vector<gateway::DetectedObject>& detections,
                                         const PipelineConfig& config) {
    AutoCaptions out;
    out.global = providers.caption_image(image, std::nullopt, general_prompt());
    out.people_detail = providers.caption_image(image, std::nullopt, people_prompt());
    for (const auto& d : detections) {
        auto cat = categorize_object(d.label);
        if (!cat) continue;
        if (cat->category == ObjectCategory::People && !(d.confidence > config.person_detection_min_conf)) continue;
        auto crop = crop_rectangle(d.bbox);
        if (!crop) continue;
        try {
            out.per_object.push_back({cat->category, d.label, providers.caption_image(image, crop, cat->prompt)});
        } catch (const gateway::FixtureMissing&) {
            throw;
        } catch (const Error& e) {
            out.warnings.push_back("caption for '" + d.label + "' omitted: " + e.what());
        }
    }
    return out;
}

MergedCaptions merge_evidence_captions(const AutoCaptions& autos, const std::vector<wiki::CandidateEntity>& entities) {
    std::vector<std::string> people, other;
    auto push = [](std::vector<std::string>& v, const std::string& s) {
        std::string t = text::collapse_whitespace(s);
        if (!t.empty()) v.push_back(std::move(t));
    };
    push(people, autos.people_detail);
    push(other, autos.global);
    for (const auto& o : autos.per_object)
        push(o.category == ObjectCategory::People ? people : other, o.caption);

    std::vector<const wiki::CandidateEntity*> sorted;
    for (const auto& e : entities) sorted.push_back(&e);
    std::stable_sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->name < b->name; });
    for (const auto* e : sorted) {
        std::string line = e->name;
        if (e->description && !text::trim(*e->description).empty()) line += ": " + *e->description;
        push(e->kind == wiki::NeKind::Person ? people : other, line);
    }
    return {text::join(people, "; "), text::join(other, "; ")};
}

Json to_json(const AutoCaptions& a) {
    Json objects = Json::array();
    for (const auto& o : a.per_object)
        objects.push_back({{"category", category_name(o.category)}, {"label", o.label}, {"caption", o.caption}});
    return Json{{"global", a.global}, {"people_detail", a.people_detail}, {"per_object", objects}, {"warnings", a.warnings}};
}

}  // namespace cove::caption
