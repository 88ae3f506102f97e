#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace diffusia {

/// Fixed 12-significant-digit scientific formatting ("%.11e"), the number
/// format of every report artifact; output is byte-stable across runs.
std::string format_sci(double value);

/**
 * Minimal ordered JSON document builder with deterministic serialization:
 * object keys keep insertion order and all floating-point values render via
 * format_sci (non-finite values render as null), so identical inputs produce
 * byte-identical artifacts.
 */
class JsonValue {
  public:
    JsonValue() : value_(nullptr) {}
    JsonValue(std::nullptr_t) : value_(nullptr) {}
    JsonValue(bool b) : value_(b) {}
    JsonValue(int v) : value_(static_cast<std::int64_t>(v)) {}
    JsonValue(std::int64_t v) : value_(v) {}
    JsonValue(std::uint64_t v) : value_(static_cast<std::int64_t>(v)) {}
    JsonValue(double v) : value_(v) {}
    JsonValue(const char* s) : value_(std::string(s)) {}
    JsonValue(std::string s) : value_(std::move(s)) {}

    static JsonValue object();
    static JsonValue array();

    /// Object access; inserts the key (in order) when absent.
    JsonValue& operator[](const std::string& key);

    void push_back(JsonValue v);

    std::string dump(int indent = 2) const;

  private:
    using Object = std::vector<std::pair<std::string, JsonValue>>;
    using Array = std::vector<JsonValue>;
    std::variant<std::nullptr_t, bool, std::int64_t, double, std::string,
                 std::shared_ptr<Object>, std::shared_ptr<Array>>
        value_;

    void write(std::string& out, int indent, int depth) const;
};

} // namespace diffusia
