#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mixmono {

/// Doubles serialize with 17 significant digits everywhere (JSON and CSV),
/// which round-trips the bit pattern exactly and keeps replays faithful.
std::string fmt_double(double v);

std::string json_escape(std::string_view s);

/// Minimal ordered JSON builder. Reports are written through this instead
/// of a general JSON library so that field order and float formatting stay
/// byte-stable across runs.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view k);
    JsonWriter& value(double v);
    JsonWriter& value(std::int64_t v);
    JsonWriter& value(std::uint64_t v);
    JsonWriter& value(int v);
    JsonWriter& value(bool v);
    JsonWriter& value(std::string_view v);
    JsonWriter& value(const char* v) { return value(std::string_view(v)); }
    JsonWriter& null();

    const std::string& str() const { return out_; }

private:
    void comma();
    std::string out_;
    std::vector<bool> first_;
    bool pending_key_ = false;
};

}  // namespace mixmono
