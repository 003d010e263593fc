#include "metaharvest/schema/schema.hpp"

namespace metaharvest::schema {

namespace detail {
extern std::string_view const kLterLifeSchema;
extern std::string_view const kCroissantSchema;
}  // namespace detail

auto builtin_schema_ids() -> std::vector<std::string>
{
    return {"lter-life", "croissant"};
}

auto builtin_schema_json(std::string_view id) -> std::string_view
{
    if (id == "lter-life") {
        return detail::kLterLifeSchema;
    }
    if (id == "croissant") {
        return detail::kCroissantSchema;
    }
    throw UnknownSchemaError("unknown built-in schema '" + std::string(id) + "' (expected lter-life or croissant)");
}

}  // namespace metaharvest::schema
