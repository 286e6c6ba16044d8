#include "karb/rational.hpp"

#include <cctype>

namespace karb {

std::optional<Rat> rat_from_string(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 >= text.size()) return std::nullopt;
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    auto digits_ok = [](const std::string& s, bool allow_sign) {
        if (s.empty()) return false;
        std::size_t i = 0;
        if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        return true;
    };
    if (!digits_ok(num, true) || !digits_ok(den, false)) return std::nullopt;
    BigInt p(num), q(den);
    if (q == 0) return std::nullopt;
    return Rat(p, q);
}

}  // namespace karb
