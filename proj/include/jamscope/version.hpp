#pragma once

namespace jamscope {

#ifndef JAMSCOPE_GIT_REV
#define JAMSCOPE_GIT_REV "unversioned"
#endif

// git-describe-style version string, embedded into every artifact
// (manifests, model files, reports) so a run can be traced to a build.
inline constexpr const char* kVersion = "0.1.0+" JAMSCOPE_GIT_REV;

} // namespace jamscope
