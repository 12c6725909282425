#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace testsupport {

using Json = nlohmann::json;

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    Json j;
    in >> j;
    return j;
}

// Minimal JSON-schema subset validator covering what the published schemas
// use: type, enum, required, properties, items, minItems/maxItems and
// intra-repository $ref ("file.schema.json#/definitions/name" or "#/...").
class SchemaValidator {
public:
    explicit SchemaValidator(std::string schema_dir) : dir_(std::move(schema_dir)) {}

    // returns an empty string on success, else a description of the failure
    std::string validate(const Json& value, const std::string& schema_file) {
        const Json schema = document(schema_file);
        return check(value, schema, schema_file, "$");
    }

private:
    const Json& document(const std::string& file) {
        auto it = cache_.find(file);
        if (it == cache_.end())
            it = cache_.emplace(file, load_json_file(dir_ + "/" + file)).first;
        return it->second;
    }

    Json resolve_ref(const std::string& ref, const std::string& current_file,
                     std::string& ref_file) {
        const auto hash = ref.find('#');
        ref_file = (hash == 0) ? current_file : ref.substr(0, hash);
        const std::string pointer = (hash == std::string::npos) ? "" : ref.substr(hash + 1);
        Json node = document(ref_file);
        if (!pointer.empty()) node = node.at(Json::json_pointer(pointer));
        return node;
    }

    std::string check(const Json& v, const Json& schema, const std::string& file,
                      const std::string& path) {
        if (schema.contains("$ref")) {
            std::string ref_file;
            const Json target = resolve_ref(schema["$ref"].get<std::string>(), file, ref_file);
            return check(v, target, ref_file, path);
        }
        if (schema.contains("type")) {
            const std::string t = schema["type"].get<std::string>();
            const bool ok = (t == "object" && v.is_object()) || (t == "array" && v.is_array()) ||
                            (t == "string" && v.is_string()) || (t == "boolean" && v.is_boolean()) ||
                            (t == "integer" && v.is_number_integer()) ||
                            (t == "number" && v.is_number());
            if (!ok) return path + ": expected " + t + ", got " + std::string(v.type_name());
        }
        if (schema.contains("enum")) {
            bool found = false;
            for (const auto& e : schema["enum"])
                if (e == v) found = true;
            if (!found) return path + ": value not in enum";
        }
        if (v.is_object()) {
            if (schema.contains("required"))
                for (const auto& key : schema["required"])
                    if (!v.contains(key.get<std::string>()))
                        return path + ": missing required key " + key.get<std::string>();
            if (schema.contains("properties"))
                for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it)
                    if (v.contains(it.key())) {
                        const std::string err = check(v[it.key()], it.value(), file,
                                                      path + "." + it.key());
                        if (!err.empty()) return err;
                    }
        }
        if (v.is_array()) {
            if (schema.contains("minItems") && v.size() < schema["minItems"].get<std::size_t>())
                return path + ": too few items";
            if (schema.contains("maxItems") && v.size() > schema["maxItems"].get<std::size_t>())
                return path + ": too many items";
            if (schema.contains("items")) {
                for (std::size_t i = 0; i < v.size(); ++i) {
                    const std::string err = check(v[i], schema["items"], file,
                                                  path + "[" + std::to_string(i) + "]");
                    if (!err.empty()) return err;
                }
            }
        }
        return "";
    }

    std::string dir_;
    std::map<std::string, Json> cache_;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace testsupport
