#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace piwb {

/// Index of a variable in the global registry. Ordinals give the canonical
/// variable order used by monomial comparison and printing.
using VarId = std::int32_t;

/// Process-wide interning table name <-> ordinal. Append-only; safe for
/// concurrent readers/writers.
class VarTable {
  public:
    static VarTable &instance() {
        static VarTable t;
        return t;
    }

    VarId intern(const std::string &name) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = index_.find(name);
        if (it != index_.end()) return it->second;
        VarId id = static_cast<VarId>(names_.size());
        names_.push_back(name);
        index_.emplace(name, id);
        return id;
    }

    std::string name(VarId id) const {
        std::lock_guard<std::mutex> lock(mu_);
        return names_.at(static_cast<size_t>(id));
    }

    /// First name of the form <prefix><k>, k = 1, 2, ..., not yet interned.
    VarId fresh(const std::string &prefix) {
        std::lock_guard<std::mutex> lock(mu_);
        for (int k = 1;; ++k) {
            std::string cand = prefix + std::to_string(k);
            if (index_.find(cand) == index_.end()) {
                VarId id = static_cast<VarId>(names_.size());
                names_.push_back(cand);
                index_.emplace(cand, id);
                return id;
            }
        }
    }

    size_t size() const {
        std::lock_guard<std::mutex> lock(mu_);
        return names_.size();
    }

  private:
    VarTable() = default;
    mutable std::mutex mu_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, VarId> index_;
};

inline VarId var(const std::string &name) { return VarTable::instance().intern(name); }
inline std::string var_name(VarId id) { return VarTable::instance().name(id); }

} // namespace piwb
