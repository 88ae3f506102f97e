#include "diffusia/json_writer.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace diffusia {

std::string format_sci(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.11e", value);
    return buffer;
}

JsonValue JsonValue::object() {
    JsonValue v;
    v.value_ = std::make_shared<Object>();
    return v;
}

JsonValue JsonValue::array() {
    JsonValue v;
    v.value_ = std::make_shared<Array>();
    return v;
}

JsonValue& JsonValue::operator[](const std::string& key) {
    if (!std::holds_alternative<std::shared_ptr<Object>>(value_)) {
        if (std::holds_alternative<std::nullptr_t>(value_)) {
            value_ = std::make_shared<Object>();
        } else {
            throw std::logic_error("JsonValue: not an object");
        }
    }
    auto& obj = *std::get<std::shared_ptr<Object>>(value_);
    for (auto& [k, v] : obj) {
        if (k == key) return v;
    }
    obj.emplace_back(key, JsonValue());
    return obj.back().second;
}

void JsonValue::push_back(JsonValue v) {
    if (!std::holds_alternative<std::shared_ptr<Array>>(value_)) {
        if (std::holds_alternative<std::nullptr_t>(value_)) {
            value_ = std::make_shared<Array>();
        } else {
            throw std::logic_error("JsonValue: not an array");
        }
    }
    std::get<std::shared_ptr<Array>>(value_)->push_back(std::move(v));
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

void newline_indent(std::string& out, int indent, int depth) {
    if (indent <= 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * depth), ' ');
}

} // namespace

void JsonValue::write(std::string& out, int indent, int depth) const {
    if (std::holds_alternative<std::nullptr_t>(value_)) {
        out += "null";
    } else if (std::holds_alternative<bool>(value_)) {
        out += std::get<bool>(value_) ? "true" : "false";
    } else if (std::holds_alternative<std::int64_t>(value_)) {
        out += std::to_string(std::get<std::int64_t>(value_));
    } else if (std::holds_alternative<double>(value_)) {
        const double v = std::get<double>(value_);
        out += std::isfinite(v) ? format_sci(v) : "null";
    } else if (std::holds_alternative<std::string>(value_)) {
        write_escaped(out, std::get<std::string>(value_));
    } else if (std::holds_alternative<std::shared_ptr<Object>>(value_)) {
        const auto& obj = *std::get<std::shared_ptr<Object>>(value_);
        if (obj.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (const auto& [k, v] : obj) {
            if (!first) out += ',';
            first = false;
            newline_indent(out, indent, depth + 1);
            write_escaped(out, k);
            out += indent > 0 ? ": " : ":";
            v.write(out, indent, depth + 1);
        }
        newline_indent(out, indent, depth);
        out += '}';
    } else {
        const auto& arr = *std::get<std::shared_ptr<Array>>(value_);
        if (arr.empty()) {
            out += "[]";
            return;
        }
        out += '[';
        bool first = true;
        for (const auto& v : arr) {
            if (!first) out += ',';
            first = false;
            newline_indent(out, indent, depth + 1);
            v.write(out, indent, depth + 1);
        }
        newline_indent(out, indent, depth);
        out += ']';
    }
}

std::string JsonValue::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    out += '\n';
    return out;
}

} // namespace diffusia
