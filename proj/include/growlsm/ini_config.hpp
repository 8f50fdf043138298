#ifndef GROWLSM_INI_CONFIG_HPP_
#define GROWLSM_INI_CONFIG_HPP_

#include <map>
#include <string>

#include "growlsm/engine.hpp"
#include "growlsm/workload.hpp"

namespace growlsm {

/// `key = value` pairs under bracketed [section] headers; `#` starts a
/// comment. Unknown sections or keys are rejected.
class IniFile {
 public:
  static IniFile parse_file(const std::string& path);
  static IniFile parse_text(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const;
  const std::map<std::string, std::map<std::string, std::string>>& sections() const {
    return sections_;
  }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

struct FullConfig {
  TreeConfig tree;
  WorkloadSpec workload;
};

/// Parse and range-check an [engine]/[scheme]/[workload] config file.
/// Throws std::invalid_argument with a one-line diagnostic on any problem.
FullConfig load_config(const std::string& path);
FullConfig parse_config_text(const std::string& text);

}  // namespace growlsm

#endif  // GROWLSM_INI_CONFIG_HPP_
