// Validates a reproduce summary against the shipped schema. Interprets the
// subset of JSON Schema the schema file actually uses: type, required,
// properties, items, minimum.

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

using Json = nlohmann::json;

namespace {

bool type_matches(const Json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "boolean") return value.is_boolean();
  if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
  if (type == "number") return value.is_number();
  return false;
}

bool validate(const Json& value, const Json& schema, const std::string& where) {
  if (schema.contains("type") && !type_matches(value, schema["type"].get<std::string>())) {
    std::fprintf(stderr, "%s: expected type %s\n", where.c_str(),
                 schema["type"].get<std::string>().c_str());
    return false;
  }
  if (schema.contains("minimum") && value.is_number() &&
      value.get<double>() < schema["minimum"].get<double>()) {
    std::fprintf(stderr, "%s: below minimum\n", where.c_str());
    return false;
  }
  if (schema.contains("required"))
    for (const auto& key : schema["required"]) {
      if (!value.contains(key.get<std::string>())) {
        std::fprintf(stderr, "%s: missing required key '%s'\n", where.c_str(),
                     key.get<std::string>().c_str());
        return false;
      }
    }
  if (schema.contains("properties"))
    for (const auto& [key, sub] : schema["properties"].items())
      if (value.contains(key) && !validate(value[key], sub, where + "." + key)) return false;
  if (schema.contains("items") && value.is_array()) {
    int i = 0;
    for (const auto& item : value)
      if (!validate(item, schema["items"], where + "[" + std::to_string(i++) + "]")) return false;
  }
  return true;
}

Json load(const char* path) {
  std::ifstream in(path);
  if (!in) {
    std::fprintf(stderr, "cannot open %s\n", path);
    std::exit(2);
  }
  Json j;
  in >> j;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: %s schema.json summary.json\n", argv[0]);
    return 2;
  }
  const Json schema = load(argv[1]);
  const Json summary = load(argv[2]);
  if (!validate(summary, schema, "summary")) return 1;
  std::printf("%s validates against %s\n", argv[2], argv[1]);
  return 0;
}
