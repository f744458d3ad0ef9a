#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace a2opt {

// "key = value" per line; '#' starts a comment, blank lines are ignored.
// Reads are tracked so a config full of unread keys (typos) can be rejected.
class KeyValues {
  public:
    static KeyValues parse(const std::string& text);
    static KeyValues load(const std::string& path);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<std::string> get_list(const std::string& key, const std::vector<std::string>& fallback) const;

    // Throws DataError naming every key no getter ever looked at.
    void require_all_consumed() const;

  private:
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> read_;
};

}  // namespace a2opt
