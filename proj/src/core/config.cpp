#include "cove/core/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "cove/core/errors.hpp"
#include "cove/core/text.hpp"

namespace cove {

namespace {

void flatten(const Json& j, const std::string& prefix, std::map<std::string, Json>& out) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        // domain_allowlist is the only array-valued key; everything else nested is a group.
        if (it.value().is_object())
            flatten(it.value(), key, out);
        else
            out[key] = it.value();
    }
}

double as_number(const std::string& key, const Json& v) {
    if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
    return v.get<double>();
}

int as_int(const std::string& key, const Json& v) {
    if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
    return v.get<int>();
}

bool as_bool(const std::string& key, const Json& v) {
    if (!v.is_boolean()) throw ConfigError("config key '" + key + "' must be a boolean");
    return v.get<bool>();
}

std::string as_string(const std::string& key, const Json& v) {
    if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
    return v.get<std::string>();
}

bool* toggle_slot(Toggles& t, std::string_view name) {
    if (name == "web_captions") return &t.web_captions;
    if (name == "visual_entities") return &t.visual_entities;
    if (name == "wikipedia_entities") return &t.wikipedia_entities;
    if (name == "automated_captions") return &t.automated_captions;
    if (name == "knowledge_gap") return &t.knowledge_gap;
    if (name == "context_prediction") return &t.context_prediction;
    if (name == "veracity_prediction") return &t.veracity_prediction;
    if (name == "veracity_rules") return &t.veracity_rules;
    return nullptr;
}

void check_unit(const char* name, double v) {
    if (!(v >= 0.0 && v <= 1.0))
        throw ConfigError(std::string("config key '") + name + "' out of range [0,1]");
}

}  // namespace

void PipelineConfig::validate() const {
    check_unit("t_match", t_match);
    check_unit("t_non_match", t_non_match);
    check_unit("visual_entity_min_score", visual_entity_min_score);
    check_unit("t_wiki_text", t_wiki_text);
    check_unit("t_wiki_image_person", t_wiki_image_person);
    check_unit("t_wiki_image_other", t_wiki_image_other);
    check_unit("person_detection_min_conf", person_detection_min_conf);
    check_unit("temperature", temperature);
    if (!(wiki_passage_relevance_min >= 0.0))
        throw ConfigError("config key 'wiki_passage_relevance_min' must be >= 0");
    if (workers < 1) throw ConfigError("config key 'workers' must be >= 1");
    if (knn_k < 1) throw ConfigError("config key 'knn_k' must be >= 1");
    if (web_caption_budget_l < 1) throw ConfigError("config key 'web_caption_budget_l' must be >= 1");
    if (t_non_match > t_match)
        throw ConfigError("range ordering violated: t_non_match must not exceed t_match");
}

PipelineConfig parse_config(std::string_view text_in) {
    PipelineConfig cfg;
    if (text::trim(text_in).empty()) return cfg;

    Json doc;
    try {
        doc = Json::parse(text_in);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("config is not well-formed: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a key-value object");

    std::map<std::string, Json> flat;
    flatten(doc, "", flat);

    using Setter = std::function<void(const std::string&, const Json&)>;
    const std::map<std::string, Setter> setters = {
        {"t_match", [&](auto& k, auto& v) { cfg.t_match = as_number(k, v); }},
        {"t_non_match", [&](auto& k, auto& v) { cfg.t_non_match = as_number(k, v); }},
        {"visual_entity_min_score",
         [&](auto& k, auto& v) { cfg.visual_entity_min_score = as_number(k, v); }},
        {"t_wiki_text", [&](auto& k, auto& v) { cfg.t_wiki_text = as_number(k, v); }},
        {"t_wiki_image_person",
         [&](auto& k, auto& v) { cfg.t_wiki_image_person = as_number(k, v); }},
        {"t_wiki_image_other", [&](auto& k, auto& v) { cfg.t_wiki_image_other = as_number(k, v); }},
        {"person_detection_min_conf",
         [&](auto& k, auto& v) { cfg.person_detection_min_conf = as_number(k, v); }},
        {"knn_k", [&](auto& k, auto& v) { cfg.knn_k = as_int(k, v); }},
        {"web_caption_budget_l", [&](auto& k, auto& v) { cfg.web_caption_budget_l = as_int(k, v); }},
        {"wiki_passage_relevance_min",
         [&](auto& k, auto& v) { cfg.wiki_passage_relevance_min = as_number(k, v); }},
        {"temperature", [&](auto& k, auto& v) { cfg.temperature = as_number(k, v); }},
        {"domain_allowlist",
         [&](auto& k, auto& v) {
             if (v.is_null()) {
                 cfg.domain_allowlist.reset();
                 return;
             }
             if (!v.is_array()) throw ConfigError("config key '" + k + "' must be a list");
             std::set<std::string> domains;
             for (const auto& d : v) {
                 if (!d.is_string()) throw ConfigError("config key '" + k + "' must list strings");
                 domains.insert(text::to_lower_ascii(text::trim(d.template get<std::string>())));
             }
             cfg.domain_allowlist = std::move(domains);
         }},
        {"context_for_rule_verdicts",
         [&](auto& k, auto& v) { cfg.context_for_rule_verdicts = as_bool(k, v); }},
        {"workers", [&](auto& k, auto& v) { cfg.workers = as_int(k, v); }},
        {"resources.entity_index", [&](auto& k, auto& v) { cfg.entity_index = as_string(k, v); }},
        {"resources.ner_gazetteer", [&](auto& k, auto& v) { cfg.ner_gazetteer = as_string(k, v); }},
        {"resources.prompts_dir", [&](auto& k, auto& v) { cfg.prompts_dir = as_string(k, v); }},
        {"web_text_field",
         [&](auto& k, auto& v) {
             const std::string s = v.is_string() ? v.template get<std::string>() : "";
             if (s == "caption")
                 cfg.web_text_field = WebTextField::Caption;
             else if (s == "title")
                 cfg.web_text_field = WebTextField::Title;
             else
                 throw ConfigError("config key '" + k + "' must be \"caption\" or \"title\"");
         }},
        {"veracity_backend",
         [&](auto& k, auto& v) {
             const std::string s = v.is_string() ? v.template get<std::string>() : "";
             if (s == "generative")
                 cfg.veracity_backend = VeracityBackend::Generative;
             else if (s == "classifier")
                 cfg.veracity_backend = VeracityBackend::Classifier;
             else
                 throw ConfigError("config key '" + k + "' must be \"generative\" or \"classifier\"");
         }},
    };

    for (const auto& [key, value] : flat) {
        if (key.rfind("toggles.", 0) == 0) {
            bool* slot = toggle_slot(cfg.toggles, std::string_view(key).substr(8));
            if (!slot) throw ConfigError("unknown config key '" + key + "'");
            *slot = as_bool(key, value);
            continue;
        }
        auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
        it->second(key, value);
    }
    cfg.validate();
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    PipelineConfig cfg = parse_config(ss.str());
    const auto base = path.parent_path();
    for (std::string* p : {&cfg.entity_index, &cfg.ner_gazetteer, &cfg.prompts_dir})
        if (!p->empty() && std::filesystem::path(*p).is_relative()) *p = (base / *p).lexically_normal().string();
    return cfg;
}

Toggles apply_toggle_overrides(Toggles base, std::string_view spec) {
    size_t start = 0;
    while (start <= spec.size()) {
        size_t end = spec.find(',', start);
        if (end == std::string_view::npos) end = spec.size();
        std::string_view part = text::trim(spec.substr(start, end - start));
        start = end + 1;
        if (part.empty()) {
            if (end == spec.size()) break;
            continue;
        }
        const size_t eq = part.find('=');
        std::string name(text::trim(part.substr(0, eq)));
        std::string value =
            eq == std::string_view::npos ? "on" : text::to_lower_ascii(text::trim(part.substr(eq + 1)));
        bool* slot = toggle_slot(base, name);
        if (!slot) throw ConfigError("unknown toggle '" + name + "'");
        if (value == "on" || value == "true" || value == "1")
            *slot = true;
        else if (value == "off" || value == "false" || value == "0")
            *slot = false;
        else
            throw ConfigError("toggle '" + name + "' expects on/off");
        if (end == spec.size()) break;
    }
    return base;
}

std::set<std::string> trusted_news_domains() {
    return {"theguardian.com", "usatoday.com", "nytimes.com",   "washingtonpost.com",
            "reuters.com",     "indiatimes.com", "bbc.com",     "cnn.com",
            "nbcnews.com",     "thetimes.co.uk", "apnews.com"};
}

void to_json(Json& j, const Toggles& t) {
    j = Json{{"web_captions", t.web_captions},
             {"visual_entities", t.visual_entities},
             {"wikipedia_entities", t.wikipedia_entities},
             {"automated_captions", t.automated_captions},
             {"knowledge_gap", t.knowledge_gap},
             {"context_prediction", t.context_prediction},
             {"veracity_prediction", t.veracity_prediction},
             {"veracity_rules", t.veracity_rules}};
}

void from_json(const Json& j, Toggles& t) {
    t = Toggles{};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool* slot = toggle_slot(t, it.key());
        if (!slot) throw ConfigError("unknown toggle '" + it.key() + "'");
        *slot = it.value().get<bool>();
    }
}

void to_json(Json& j, const PipelineConfig& c) {
    j = Json{{"t_match", c.t_match},
             {"t_non_match", c.t_non_match},
             {"visual_entity_min_score", c.visual_entity_min_score},
             {"t_wiki_text", c.t_wiki_text},
             {"t_wiki_image_person", c.t_wiki_image_person},
             {"t_wiki_image_other", c.t_wiki_image_other},
             {"person_detection_min_conf", c.person_detection_min_conf},
             {"knn_k", c.knn_k},
             {"web_caption_budget_l", c.web_caption_budget_l},
             {"wiki_passage_relevance_min", c.wiki_passage_relevance_min},
             {"temperature", c.temperature},
             {"toggles", c.toggles},
             {"web_text_field", c.web_text_field == WebTextField::Caption ? "caption" : "title"},
             {"veracity_backend",
              c.veracity_backend == VeracityBackend::Generative ? "generative" : "classifier"}};
    j["context_for_rule_verdicts"] = c.context_for_rule_verdicts;
    j["workers"] = c.workers;
    j["resources"] = Json{{"entity_index", c.entity_index},
                          {"ner_gazetteer", c.ner_gazetteer},
                          {"prompts_dir", c.prompts_dir}};
    j["domain_allowlist"] = c.domain_allowlist ? Json(*c.domain_allowlist) : Json(nullptr);
}

void from_json(const Json& j, PipelineConfig& c) { c = parse_config(j.dump()); }

}  // namespace cove
