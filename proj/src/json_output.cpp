#include "critlen/json_output.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace critlen {

const char* version() { return CRITLEN_VERSION; }

std::string format_double(double v)
{
    if (!std::isfinite(v))
        return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void emit(std::ostream& out, const nlohmann::json& j, int indent, int level)
{
    const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * level), ' ');
    const char* newline = indent > 0 ? "\n" : "";
    switch (j.type()) {
    case nlohmann::json::value_t::object: {
        if (j.empty()) {
            out << "{}";
            return;
        }
        out << '{' << newline;
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first)
                out << ',' << newline;
            first = false;
            out << pad << nlohmann::json(it.key()).dump() << (indent > 0 ? ": " : ":");
            emit(out, it.value(), indent, level + 1);
        }
        out << newline << close_pad << '}';
        return;
    }
    case nlohmann::json::value_t::array: {
        if (j.empty()) {
            out << "[]";
            return;
        }
        out << '[' << newline;
        bool first = true;
        for (const auto& e : j) {
            if (!first)
                out << ',' << newline;
            first = false;
            out << pad;
            emit(out, e, indent, level + 1);
        }
        out << newline << close_pad << ']';
        return;
    }
    case nlohmann::json::value_t::number_float:
        out << format_double(j.get<double>());
        return;
    default:
        out << j.dump();
        return;
    }
}

} // namespace

void write_json(std::ostream& out, const nlohmann::json& j, int indent) { emit(out, j, indent, 0); }

std::string dump_json(const nlohmann::json& j, int indent)
{
    std::ostringstream s;
    write_json(s, j, indent);
    return s.str();
}

nlohmann::json envelope(const nlohmann::json& config, nlohmann::json data)
{
    return {{"header", {{"tool", "critlen"}, {"version", version()}, {"config", config}}}, {"data", std::move(data)}};
}

} // namespace critlen
