#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include "gibbsinf/errors.hpp"

namespace gibbsinf {

/// CSV writer with a fixed numeric format (%.12g) so identical runs produce
/// identical bytes.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw InputError("cannot open output file " + path);
    }

    void field(const std::string& s) {
        sep();
        out_ << s;
    }
    void field(double v) {
        sep();
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        out_ << buf;
    }
    void field(long long v) {
        sep();
        out_ << v;
    }
    void field(int v) { field(static_cast<long long>(v)); }
    void endrow() {
        out_ << "\n";
        first_ = true;
    }

  private:
    void sep() {
        if (!first_) out_ << ",";
        first_ = false;
    }
    std::ofstream out_;
    bool first_ = true;
};

}  // namespace gibbsinf
