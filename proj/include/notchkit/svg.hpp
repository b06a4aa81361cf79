#pragma once

#include <string>

#include "notchkit/palette.hpp"
#include "notchkit/workspace.hpp"

namespace notchkit {

/// Static picture of a workspace: command blocks as stacked boxes, value
/// blocks inline in their sockets, container slots indented. For figures
/// and documentation only.
std::string render_svg(const Palette& palette, const Workspace& w);

}  // namespace notchkit
