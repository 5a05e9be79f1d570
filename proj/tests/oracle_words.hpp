#pragma once

// Brute-force oracles for the word module, kept independent of the search
// code under test: generation is decided by enumerating whole courses and
// reading the induced labeling off the target word.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "afkit/words.hpp"

namespace oracle {

// Does a generate c?  Decided by scanning every surjective adjacent course.
inline bool generates_brute(const std::string& a, const std::string& c) {
    int k = (int)a.size(), m = (int)c.size();
    if (k == 0 || m < k) return false;
    for (const auto& f : afkit::enumerate_adjacent(m, k, false, true)) {
        bool ok = true;
        for (int i = 0; i < m && ok; ++i)
            if (a[f.values[i] - 1] != c[i]) ok = false;
        if (ok) return true;
    }
    return false;
}

// Every generator word of minimal length: enumerate all surjective adjacent
// courses of every shorter-or-equal length and read the generator off c.
inline std::set<std::string> minimal_generators_brute(const std::string& c) {
    int m = (int)c.size();
    for (int k = 1; k <= m; ++k) {
        std::set<std::string> found;
        for (const auto& f : afkit::enumerate_adjacent(m, k, false, true)) {
            std::string a(k, '\0');
            std::vector<bool> fixed(k, false);
            bool ok = true;
            for (int i = 0; i < m && ok; ++i) {
                int p = f.values[i] - 1;
                if (fixed[p]) {
                    if (a[p] != c[i]) ok = false;
                } else {
                    a[p] = c[i];
                    fixed[p] = true;
                }
            }
            if (ok) found.insert(a);
        }
        if (!found.empty()) return found;
    }
    return {};
}

inline std::vector<std::string> all_words(const std::string& alphabet, int len) {
    std::vector<std::string> out{""};
    for (int i = 0; i < len; ++i) {
        std::vector<std::string> next;
        next.reserve(out.size() * alphabet.size());
        for (const auto& w : out)
            for (char ch : alphabet) next.push_back(w + ch);
        out = std::move(next);
    }
    return out;
}

}  // namespace oracle
