#pragma once

#include <string>
#include <string_view>

#include "chartkit/errors.hpp"

namespace chartkit::sim {

enum class PromptStage { data, image };

// A two-part prompt: fixed system text plus a user template whose {data}
// slot (wrapped in <data> ... </data> delimiters) receives the table text.
struct PromptTemplate {
  PromptStage stage = PromptStage::data;
  std::string system_text;
  std::string user_template;

  std::string render_user(std::string_view data) const {
    const std::string slot = "{data}";
    const auto pos = user_template.find(slot);
    if (pos == std::string::npos)
      throw Error(errc::config_invalid, "prompt user template has no {data} slot");
    std::string out = user_template;
    out.replace(pos, slot.size(), data);
    return out;
  }
};

// Stage-1 prompt: imitate a CSV table, drifting as far from the original
// content as possible.
inline PromptTemplate default_data_prompt() {
  PromptTemplate t;
  t.stage = PromptStage::data;
  t.system_text =
      "Copying the following table information can be expanded and adapted as "
      "appropriate, The imitation is as irrelevant as possible to the original text.";
  t.user_template = "The data is <data> {data} </data>";
  return t;
}

// Stage-2 prompt: turn a CSV table into self-contained Python drawing code.
inline PromptTemplate default_image_prompt() {
  PromptTemplate t;
  t.stage = PromptStage::image;
  t.system_text =
      R"PROMPT(Consider you are a professional Python grapher.
Please draw and save a chart based on the following data using Python, and images must be clear and intuitive.
Choose a plot type that best suits the value, for example, line, column, scatter, and pie charts.
Drawing techniques such as background grids can be used.
Draw as much variety as possible.
Clear the current image state at the end of the code.
If the text length of the label is too long, use the method of adding the parameter rotation or display label on separate lines seting wrap=true.
The figsize parameter is set to a larger setting to prevent content from being displayed.
Automatically resize the image by tight_layout().
You must use xticks to prevent interpolation.
Do not set special fonts such as sans-serif and Arial etc. to avoid the problem of missing fonts.
If the string in the picture is too long, find a way for all characters to show and not be overwritten and stacked on top of each other.
Do not have extra leading words at the beginning and end of the generated code, such as python code, python, ```, etc.
Check the generated code without errors, do not include undefined functions.)PROMPT";
  t.user_template = "The data is <data> {data} </data>";
  return t;
}

}  // namespace chartkit::sim
