#include <string>
#include <vector>

#include "cove/metrics/text_metrics.hpp"

namespace cove::metrics {

namespace {

using Word = std::u32string;

bool is_vowel(char32_t c) { return c == U'a' || c == U'e' || c == U'i' || c == U'o' || c == U'u'; }

// y is a consonant at the start of a word or after a vowel.
std::vector<bool> consonant_flags(const Word& w) {
    std::vector<bool> flags(w.size());
    for (size_t i = 0; i < w.size(); ++i) {
        if (is_vowel(w[i]))
            flags[i] = false;
        else if (w[i] == U'y')
            flags[i] = i == 0 ? true : !flags[i - 1];
        else
            flags[i] = true;
    }
    return flags;
}

bool is_consonant(const Word& w, size_t i) { return consonant_flags(w.substr(0, i + 1))[i]; }

int measure(const Word& stem) {
    const auto f = consonant_flags(stem);
    int m = 0;
    for (size_t i = 0; i + 1 < f.size(); ++i)
        if (!f[i] && f[i + 1]) ++m;
    return m;
}

bool contains_vowel(const Word& stem) {
    for (bool c : consonant_flags(stem))
        if (!c) return true;
    return false;
}

bool ends_double_consonant(const Word& w) {
    return w.size() >= 2 && w[w.size() - 1] == w[w.size() - 2] && is_consonant(w, w.size() - 1);
}

bool ends_cvc(const Word& w) {
    if (w.size() < 3) return false;
    const auto f = consonant_flags(w);
    const size_t n = w.size();
    const char32_t last = w[n - 1];
    return f[n - 3] && !f[n - 2] && f[n - 1] && last != U'w' && last != U'x' && last != U'y';
}

bool ends_with(const Word& w, const Word& s) { return w.size() >= s.size() && w.compare(w.size() - s.size(), s.size(), s) == 0; }

Word cut(const Word& w, size_t n) { return w.substr(0, w.size() - n); }

enum class Cond { None, MeasurePositive, MeasureAbove1, IonStem };

bool check(Cond c, const Word& stem) {
    switch (c) {
        case Cond::None: return true;
        case Cond::MeasurePositive: return measure(stem) > 0;
        case Cond::MeasureAbove1: return measure(stem) > 1;
        case Cond::IonStem: return measure(stem) > 1 && !stem.empty() && (stem.back() == U's' || stem.back() == U't');
    }
    return false;
}

struct Rule {
    Word suffix;
    Word replacement;
    Cond cond;
};

// The first rule whose suffix matches decides; a failed condition leaves the word unchanged.
Word apply_rules(const Word& w, const std::vector<Rule>& rules) {
    for (const auto& r : rules) {
        if (ends_with(w, r.suffix)) {
            Word stem = cut(w, r.suffix.size());
            return check(r.cond, stem) ? stem + r.replacement : w;
        }
    }
    return w;
}

Word step1a(const Word& w) {
    return apply_rules(w, {{U"sses", U"ss", Cond::None},
                           {U"ies", U"i", Cond::None},
                           {U"ss", U"ss", Cond::None},
                           {U"s", U"", Cond::None}});
}

Word step1b(const Word& w) {
    if (ends_with(w, U"eed")) {
        Word stem = cut(w, 3);
        return measure(stem) > 0 ? stem + U"ee" : w;
    }
    Word inter;
    bool hit = false;
    for (const Word& suffix : {Word(U"ed"), Word(U"ing")}) {
        if (ends_with(w, suffix)) {
            inter = cut(w, suffix.size());
            if (contains_vowel(inter)) {
                hit = true;
                break;
            }
        }
    }
    if (!hit) return w;
    for (const auto& [suffix, repl] : {std::pair<Word, Word>{U"at", U"ate"}, {U"bl", U"ble"}, {U"iz", U"ize"}})
        if (ends_with(inter, suffix)) return cut(inter, suffix.size()) + repl;
    if (ends_double_consonant(inter)) {
        const char32_t last = inter.back();
        if (last != U'l' && last != U's' && last != U'z') return cut(inter, 2) + last;
        return inter;
    }
    if (measure(inter) == 1 && ends_cvc(inter)) return inter + U"e";
    return inter;
}

Word step1c(const Word& w) {
    if (ends_with(w, U"y")) {
        Word stem = cut(w, 1);
        return contains_vowel(stem) ? stem + U"i" : w;
    }
    return w;
}

Word step2(const Word& w) {
    static const std::vector<Rule> rules = {
        {U"ational", U"ate", Cond::MeasurePositive}, {U"tional", U"tion", Cond::MeasurePositive},
        {U"enci", U"ence", Cond::MeasurePositive},   {U"anci", U"ance", Cond::MeasurePositive},
        {U"izer", U"ize", Cond::MeasurePositive},    {U"abli", U"able", Cond::MeasurePositive},
        {U"alli", U"al", Cond::MeasurePositive},     {U"entli", U"ent", Cond::MeasurePositive},
        {U"eli", U"e", Cond::MeasurePositive},       {U"ousli", U"ous", Cond::MeasurePositive},
        {U"ization", U"ize", Cond::MeasurePositive}, {U"ation", U"ate", Cond::MeasurePositive},
        {U"ator", U"ate", Cond::MeasurePositive},    {U"alism", U"al", Cond::MeasurePositive},
        {U"iveness", U"ive", Cond::MeasurePositive}, {U"fulness", U"ful", Cond::MeasurePositive},
        {U"ousness", U"ous", Cond::MeasurePositive}, {U"aliti", U"al", Cond::MeasurePositive},
        {U"iviti", U"ive", Cond::MeasurePositive},   {U"biliti", U"ble", Cond::MeasurePositive},
    };
    return apply_rules(w, rules);
}

Word step3(const Word& w) {
    static const std::vector<Rule> rules = {
        {U"icate", U"ic", Cond::MeasurePositive}, {U"ative", U"", Cond::MeasurePositive},
        {U"alize", U"al", Cond::MeasurePositive}, {U"iciti", U"ic", Cond::MeasurePositive},
        {U"ical", U"ic", Cond::MeasurePositive},  {U"ful", U"", Cond::MeasurePositive},
        {U"ness", U"", Cond::MeasurePositive},
    };
    return apply_rules(w, rules);
}

Word step4(const Word& w) {
    static const std::vector<Rule> rules = {
        {U"al", U"", Cond::MeasureAbove1},   {U"ance", U"", Cond::MeasureAbove1}, {U"ence", U"", Cond::MeasureAbove1},
        {U"er", U"", Cond::MeasureAbove1},   {U"ic", U"", Cond::MeasureAbove1},   {U"able", U"", Cond::MeasureAbove1},
        {U"ible", U"", Cond::MeasureAbove1}, {U"ant", U"", Cond::MeasureAbove1},  {U"ement", U"", Cond::MeasureAbove1},
        {U"ment", U"", Cond::MeasureAbove1}, {U"ent", U"", Cond::MeasureAbove1},  {U"ion", U"", Cond::IonStem},
        {U"ou", U"", Cond::MeasureAbove1},   {U"ism", U"", Cond::MeasureAbove1},  {U"ate", U"", Cond::MeasureAbove1},
        {U"iti", U"", Cond::MeasureAbove1},  {U"ous", U"", Cond::MeasureAbove1},  {U"ive", U"", Cond::MeasureAbove1},
        {U"ize", U"", Cond::MeasureAbove1},
    };
    return apply_rules(w, rules);
}

Word step5a(const Word& w) {
    if (!ends_with(w, U"e")) return w;
    Word stem = cut(w, 1);
    const int m = measure(stem);
    if (m > 1) return stem;
    if (m == 1 && !ends_cvc(stem)) return stem;
    return w;
}

Word step5b(const Word& w) {
    if (ends_with(w, U"ll") && measure(cut(w, 1)) > 1) return cut(w, 1);
    return w;
}

Word decode(std::string_view s) {
    Word out;
    for (size_t i = 0; i < s.size();) {
        const auto c = static_cast<unsigned char>(s[i]);
        char32_t cp;
        size_t len;
        if (c < 0x80) { cp = c; len = 1; }
        else if ((c >> 5) == 0x6) { cp = c & 0x1F; len = 2; }
        else if ((c >> 4) == 0xE) { cp = c & 0x0F; len = 3; }
        else if ((c >> 3) == 0x1E) { cp = c & 0x07; len = 4; }
        else { out.push_back(0xFFFD); ++i; continue; }
        if (i + len > s.size()) { out.push_back(0xFFFD); break; }
        for (size_t k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string encode(const Word& w) {
    std::string out;
    for (char32_t cp : w) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

}  // namespace

std::string porter_stem(std::string_view word) {
    Word w = decode(word);
    for (auto& c : w)
        if (c >= U'A' && c <= U'Z') c = c - U'A' + U'a';
    w = step1a(w);
    w = step1b(w);
    w = step1c(w);
    w = step2(w);
    w = step3(w);
    w = step4(w);
    w = step5a(w);
    w = step5b(w);
    return encode(w);
}

}  // namespace cove::metrics
