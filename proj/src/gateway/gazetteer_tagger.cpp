#include "cove/gateway/gazetteer_tagger.hpp"

#include <algorithm>
#include <fstream>
#include <regex>

#include "cove/core/text.hpp"

namespace cove::gateway {

namespace {

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || (static_cast<unsigned char>(c) & 0x80);
}

bool at_boundary(const std::string& s, size_t begin, size_t end) {
    const bool left = begin == 0 || !is_word_char(s[begin - 1]);
    const bool right = end >= s.size() || !is_word_char(s[end]);
    return left && right;
}

const std::regex& date_pattern() {
    static const std::regex re(
        R"(\b(?:(?:\d{1,2} )?(?:January|February|March|April|May|June|July|August|September|October|November|December)(?: \d{1,2})?,?(?: (?:1[5-9]\d\d|20\d\d))?|(?:1[5-9]\d\d|20\d\d)s?)\b)");
    return re;
}

struct Span {
    size_t begin;
    size_t end;
    std::string label;
};

}  // namespace

GazetteerTagger GazetteerTagger::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot read tagger gazetteer " + file.string());
    return parse(in);
}

GazetteerTagger GazetteerTagger::parse(std::istream& in) {
    GazetteerTagger t;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError("tagger gazetteer line " + std::to_string(lineno) + ": expected surface<TAB>label");
        t.add(line.substr(0, tab), std::string(text::trim(line.substr(tab + 1))));
    }
    return t;
}

void GazetteerTagger::add(std::string surface, std::string label) {
    if (text::trim(surface).empty() || label.empty()) return;
    entries_.push_back({std::move(surface), std::move(label)});
}

std::vector<NamedEntity> GazetteerTagger::tag(const std::string& s) const {
    std::vector<Span> spans;
    for (const auto& e : entries_) {
        for (size_t pos = s.find(e.surface); pos != std::string::npos; pos = s.find(e.surface, pos + 1)) {
            if (at_boundary(s, pos, pos + e.surface.size()))
                spans.push_back({pos, pos + e.surface.size(), e.label});
        }
    }
    for (auto it = std::sregex_iterator(s.begin(), s.end(), date_pattern()); it != std::sregex_iterator(); ++it) {
        std::string m = it->str();
        size_t len = m.size();
        while (len > 0 && (m[len - 1] == ',' || m[len - 1] == ' ')) --len;
        if (len == 0) continue;
        const auto begin = static_cast<size_t>(it->position());
        spans.push_back({begin, begin + len, "DATE"});
    }
    // Leftmost-longest, non-overlapping; gazetteer entries win ties over dates.
    std::stable_sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) {
        if (a.begin != b.begin) return a.begin < b.begin;
        return a.end - a.begin > b.end - b.begin;
    });
    std::vector<NamedEntity> out;
    size_t covered = 0;
    for (const auto& sp : spans) {
        if (sp.begin < covered) continue;
        out.push_back({s.substr(sp.begin, sp.end - sp.begin), sp.label});
        covered = sp.end;
    }
    return out;
}

LocalHandler GazetteerTagger::handler() const {
    return [self = *this](const Json& request) {
        Json entities = Json::array();
        for (const auto& e : self.tag(request.value("text", "")))
            entities.push_back({{"text", e.text}, {"label", e.label}});
        return Json{{"entities", entities}};
    };
}

}  // namespace cove::gateway
