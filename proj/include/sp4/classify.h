// Copyright 2026 The sp4 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Sorts invalid-header errors into bug categories by where they arose and
// what change would discharge them, then folds symptoms that share a fix
// site into one bug record. The heuristics are deliberate choices, pinned
// by the fixture corpus rather than claimed complete; when none fires the
// error is reported unclassified, never dropped.

#ifndef SP4_CLASSIFY_H_
#define SP4_CLASSIFY_H_

#include <string>
#include <vector>

#include "sp4/diag.h"
#include "sp4/header_algebra.h"
#include "sp4/syntax.h"
#include "sp4/typecheck.h"

namespace sp4 {

// The top-level statement spine, in program order.
std::vector<CmdPtr> top_level_statements(const Program& p);

// The leading top-level statements that build the header map from the
// packet: everything up to the last extract-bearing statement with no table
// apply before it.
std::vector<CmdPtr> parser_region(const Program& p);

// The type after the last statement of the parser region; the type with no
// valid instances when the region is empty.
HeaderType parser_exit_type(const Program& p, const CheckResult& r);

// Category of one diagnostic. Errors that do not name an instance are
// unclassified. Deterministic in (p, r, d): taxonomy, in order —
//   - a failed read in a table that lists the instance among its valids is
//     a reads bug (the key should be maskable); a failed read of an
//     unlisted instance means the apply site lacks a guard (control bug);
//   - a failure inside an action body that validity assumptions could not
//     discharge is a table action bug;
//   - a control-level failure that disappears when every defaultless table
//     is typed as if it declared a default action is a default action bug;
//   - otherwise, if the instance is valid on at least one path through the
//     parser region, the parser accepts packets the control cannot handle
//     (parser bug); failing that, the site itself is unguarded (control
//     bug).
BugCategory classify(const Program& p, const CheckResult& r,
                     const Diagnostic& d);

// r.diagnostics with the category filled in on every error.
std::vector<Diagnostic> classify_diagnostics(const Program& p,
                                             const CheckResult& r);

// One folded bug: every symptom shares the fix site.
struct BugRecord {
  BugCategory category = BugCategory::kUnclassified;
  // Stable fix-site identifier: parser(<instance>), guard(<instance>,
  // line <n>), reads(<table>), action(<table>.<action>),
  // default(<table>), or diagnostic(<line>:<col>) for the unclassified.
  std::string fix_site;
  std::vector<Diagnostic> symptoms;  // in render order
};

// Folds the errors of r by fix site, in order of first appearance. The
// record count is the bug count: the number of distinct changes needed.
std::vector<BugRecord> fold_root_causes(const Program& p,
                                        const CheckResult& r);

// JSON array, one record per diagnostic: severity, category (when
// classified), file, line, col_begin, col_end, message, and the instance,
// table and action names when present.
std::string render_structured(const std::vector<Diagnostic>& ds);

}  // namespace sp4

#endif  // SP4_CLASSIFY_H_
