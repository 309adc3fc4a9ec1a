#pragma once

#include <cstdio>
#include <string>

namespace ariel {

// Trace log: one tab-separated line per event,
//   global-ms <TAB> node <TAB> component <TAB> event-kind <TAB> detail
// accumulated in memory and written out at scenario end. Times use a
// fixed %.3f so identical runs produce byte-identical files.
class TraceWriter {
 public:
  void emit(double global_ms, const std::string& node,
            const std::string& component, const std::string& kind,
            const std::string& detail) {
    char stamp[32];
    std::snprintf(stamp, sizeof(stamp), "%.3f", global_ms);
    buffer_ += stamp;
    buffer_ += '\t';
    buffer_ += node;
    buffer_ += '\t';
    buffer_ += component;
    buffer_ += '\t';
    buffer_ += kind;
    buffer_ += '\t';
    buffer_ += detail;
    buffer_ += '\n';
  }

  void emit(double global_ms, std::uint32_t node, const std::string& component,
            const std::string& kind, const std::string& detail) {
    emit(global_ms, std::to_string(node), component, kind, detail);
  }

  const std::string& text() const { return buffer_; }

 private:
  std::string buffer_;
};

}  // namespace ariel
