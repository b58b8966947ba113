#include "subriem/schema.hpp"

#include <stdexcept>

namespace subriem {

namespace {

bool matches_type(const OrderedJson& doc, const std::string& t) {
    if (t == "object") return doc.is_object();
    if (t == "array") return doc.is_array();
    if (t == "string") return doc.is_string();
    if (t == "number") return doc.is_number();
    if (t == "integer") return doc.is_number_integer();
    if (t == "boolean") return doc.is_boolean();
    if (t == "null") return doc.is_null();
    throw std::invalid_argument("schema names an unknown type: " + t);
}

void check(const OrderedJson& schema, const OrderedJson& doc, const std::string& where,
           std::vector<std::string>& errors) {
    if (!schema.is_object()) throw std::invalid_argument("schema node is not an object");

    if (auto it = schema.find("type"); it != schema.end()) {
        bool ok = false;
        if (it->is_array()) {
            for (const auto& t : *it) ok = ok || matches_type(doc, t.get<std::string>());
        } else {
            ok = matches_type(doc, it->get<std::string>());
        }
        if (!ok) {
            errors.push_back(where + ": expected type " + it->dump() + ", got " +
                             std::string(doc.type_name()));
            return;  // further keyword checks would only cascade
        }
    }

    if (auto it = schema.find("enum"); it != schema.end()) {
        bool ok = false;
        for (const auto& v : *it) ok = ok || (v == doc);
        if (!ok) errors.push_back(where + ": value " + doc.dump() + " not in enum " + it->dump());
    }

    if (doc.is_number()) {
        const double v = doc.get<double>();
        if (auto it = schema.find("minimum"); it != schema.end() && v < it->get<double>())
            errors.push_back(where + ": " + doc.dump() + " below minimum " + it->dump());
        if (auto it = schema.find("maximum"); it != schema.end() && v > it->get<double>())
            errors.push_back(where + ": " + doc.dump() + " above maximum " + it->dump());
    }

    if (doc.is_object()) {
        const auto props = schema.find("properties");
        if (auto it = schema.find("required"); it != schema.end())
            for (const auto& name : *it)
                if (!doc.contains(name.get<std::string>()))
                    errors.push_back(where + ": missing required member '" +
                                     name.get<std::string>() + "'");
        if (props != schema.end())
            for (auto it = props->begin(); it != props->end(); ++it)
                if (doc.contains(it.key()))
                    check(it.value(), doc.at(it.key()), where + "/" + it.key(), errors);
        if (auto ap = schema.find("additionalProperties");
            ap != schema.end() && ap->is_boolean() && !ap->get<bool>())
            for (auto it = doc.begin(); it != doc.end(); ++it)
                if (props == schema.end() || !props->contains(it.key()))
                    errors.push_back(where + ": unexpected member '" + it.key() + "'");
    }

    if (doc.is_array()) {
        if (auto it = schema.find("minItems");
            it != schema.end() && doc.size() < it->get<std::size_t>())
            errors.push_back(where + ": array has " + std::to_string(doc.size()) +
                             " items, needs at least " + it->dump());
        if (auto it = schema.find("items"); it != schema.end())
            for (std::size_t i = 0; i < doc.size(); ++i)
                check(*it, doc[i], where + "/" + std::to_string(i), errors);
    }
}

}  // namespace

std::vector<std::string> schema_errors(const OrderedJson& schema, const OrderedJson& doc) {
    std::vector<std::string> errors;
    check(schema, doc, "#", errors);
    return errors;
}

void validate_against_schema(const OrderedJson& schema, const OrderedJson& doc) {
    const auto errors = schema_errors(schema, doc);
    if (errors.empty()) return;
    std::string msg = "schema validation failed:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw std::runtime_error(msg);
}

}  // namespace subriem
