#include "editbench/core/taxonomy.hpp"

#include <json.hpp>

#include "editbench/core/error.hpp"

namespace editbench {

namespace {

using OC = OperationCategory;
using OT = AtomicOperationType;

constexpr std::array<OperationInfo, kOperationCount> kTaxonomy = {{
    {OT::add_object, OC::object_manipulation, "Add an Object",
     "Insert a new element into the image."},
    {OT::remove_object, OC::object_manipulation, "Remove an Object",
     "Eliminate an existing element from the image."},
    {OT::replace_object, OC::object_manipulation, "Replace an Object",
     "Swap one element with another."},
    {OT::move_object, OC::object_manipulation, "Move an Object",
     "Change the position of an existing element within the image."},
    {OT::resize_object, OC::object_manipulation, "Resize an Object",
     "Adjust the size of an existing element."},
    {OT::rotate_object, OC::object_manipulation, "Rotate an Object",
     "Rotate an element to a specified angle."},
    {OT::duplicate_object, OC::object_manipulation, "Duplicate an Object",
     "Create a copy of an existing element."},
    {OT::change_color, OC::color_tone, "Change Color",
     "Replace the color of an element with a specified color."},
    {OT::apply_filter_weather, OC::color_tone, "Apply Filter/Weather",
     "Add a color filter or weather effect to the entire image or specific "
     "parts."},
    {OT::change_texture, OC::texture_material, "Change Texture",
     "Apply a texture to an element (e.g., change from metal to wood)."},
    {OT::change_background, OC::background_environment, "Change Background",
     "Replace the background with a different scene or color."},
    {OT::adjust_lighting, OC::lighting_shadows, "Adjust Lighting",
     "Change the overall lighting or lighting of specific elements."},
    {OT::add_text, OC::text_symbols, "Add Text",
     "Insert text into the image."},
    {OT::remove_text, OC::text_symbols, "Remove Text",
     "Eliminate existing text from the image."},
    {OT::change_text_properties, OC::text_symbols, "Change Text Properties",
     "Modify font, color, size, or position of existing text."},
    {OT::change_pose, OC::pose_expression, "Change Pose",
     "Modify the stance or posture of a person or object."},
    {OT::change_facial_expression, OC::pose_expression,
     "Change Facial Expression",
     "Alter the facial expression of a character."},
    {OT::crop_image, OC::composition_cropping, "Crop Image",
     "Adjust the framing of the image by removing outer areas."},
    {OT::reframe_composition, OC::composition_cropping, "Reframe Composition",
     "Change the focus or arrangement of elements within the image."},
    {OT::zoom_in_out, OC::composition_cropping, "Zoom In/Out",
     "Adjust the zoom level to focus on specific elements or show a broader "
     "view."},
    {OT::add_special_effects, OC::special_effects, "Add Special Effects",
     "Introduce effects like glow, motion blur, or lens flare."},
    {OT::remove_special_effects, OC::special_effects, "Remove Special Effects",
     "Eliminate existing special effects from the image."},
    {OT::add_particles, OC::special_effects, "Add Particles",
     "Insert particles like dust."},
    {OT::remove_particles, OC::special_effects, "Remove Particles",
     "Remove existing particles from the image."},
}};

struct CategoryInfo {
  OperationCategory category;
  std::string_view name;
  std::string_view description;
};

constexpr std::array<CategoryInfo, kCategoryCount> kCategories = {{
    {OC::object_manipulation, "Object Manipulation and Transformation",
     "Adding, removing, and transforming individual elements."},
    {OC::color_tone, "Color and Tone Adjustments",
     "Recoloring elements and applying global color or weather treatments."},
    {OC::texture_material, "Texture and Material Adjustments",
     "Changing the surface material of elements."},
    {OC::background_environment, "Background and Environment",
     "Replacing the backdrop or surrounding environment."},
    {OC::lighting_shadows, "Lighting and Shadows",
     "Adjusting light sources and shadow rendering."},
    {OC::text_symbols, "Text and Symbols",
     "Adding, removing, and restyling text in the image."},
    {OC::composition_cropping, "Composition and Cropping",
     "Reframing, cropping, and zooming the overall composition."},
    {OC::pose_expression, "Pose and Expression",
     "Changing body posture and facial expressions of subjects."},
    {OC::special_effects, "Special Effects",
     "Adding or removing visual effects and particles."},
}};

}  // namespace

const std::array<OperationInfo, kOperationCount>& taxonomy() {
  return kTaxonomy;
}

const OperationInfo& operation_info(AtomicOperationType type) {
  return kTaxonomy[static_cast<std::size_t>(type)];
}

std::optional<AtomicOperationType> operation_from_name(std::string_view name) {
  for (const auto& op : kTaxonomy) {
    if (op.name == name) return op.type;
  }
  return std::nullopt;
}

std::string_view category_name(OperationCategory category) {
  return kCategories[static_cast<std::size_t>(category)].name;
}

std::string_view category_description(OperationCategory category) {
  return kCategories[static_cast<std::size_t>(category)].description;
}

std::string taxonomy_json() {
  nlohmann::json categories = nlohmann::json::array();
  for (const auto& cat : kCategories) {
    nlohmann::json ops = nlohmann::json::array();
    for (const auto& op : kTaxonomy) {
      if (op.category != cat.category) continue;
      ops.push_back({{"name", std::string(op.name)},
                     {"description", std::string(op.description)}});
    }
    categories.push_back({{"name", std::string(cat.name)},
                          {"description", std::string(cat.description)},
                          {"operations", ops}});
  }
  return nlohmann::json{{"categories", categories}}.dump(2);
}

std::string taxonomy_prompt_listing() {
  std::string out;
  for (const auto& cat : kCategories) {
    out += std::string(cat.name) + ":\n";
    for (const auto& op : kTaxonomy) {
      if (op.category != cat.category) continue;
      out += "  - " + std::string(op.name) + ": " +
             std::string(op.description) + "\n";
    }
  }
  return out;
}

}  // namespace editbench
