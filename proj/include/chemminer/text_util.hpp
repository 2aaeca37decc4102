#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

namespace chemminer {

inline std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return s;
}

// Collapses whitespace runs to single spaces and trims the ends.
inline std::string collapse_ws(const std::string& s) {
    std::string out;
    bool pending = false;
    for (unsigned char c : s) {
        if (std::isspace(c)) {
            pending = !out.empty();
        } else {
            if (pending) out += ' ';
            pending = false;
            out += static_cast<char>(c);
        }
    }
    return out;
}

// Maps the common Unicode dash and quote variants to their ASCII forms.
inline std::string normalize_punct(const std::string& s) {
    static const struct { const char* from; const char* to; } table[] = {
        {"‐", "-"}, {"‑", "-"}, {"‒", "-"}, {"–", "-"},
        {"—", "-"}, {"−", "-"}, {"‘", "'"}, {"’", "'"},
        {"“", "\""}, {"”", "\""},
    };
    std::string out = s;
    for (const auto& e : table) {
        std::string from = e.from;
        std::size_t pos = 0;
        while ((pos = out.find(from, pos)) != std::string::npos) {
            out.replace(pos, from.size(), e.to);
            pos += 1;
        }
    }
    return out;
}

inline std::vector<std::string> tokenize_ws(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char c : s) {
        if (std::isspace(c)) {
            if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
        } else {
            cur += static_cast<char>(c);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

// Strips leading/trailing characters that are not alphanumeric, '%', or ')'-
// balanced punctuation typical of chemical tokens.
inline std::string strip_token(const std::string& t) {
    std::size_t b = 0, e = t.size();
    auto keep = [](unsigned char c) {
        return std::isalnum(c) || c == '%' || c == '-';
    };
    while (b < e && !keep(static_cast<unsigned char>(t[b]))) ++b;
    while (e > b && !keep(static_cast<unsigned char>(t[e - 1]))) --e;
    return t.substr(b, e - b);
}

inline std::size_t levenshtein(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

}  // namespace chemminer
