#!/usr/bin/env python3
# Copyright 2026 The Forge Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates include/forge/unicode_tables.hpp from the Python unicodedata
module.  Run from the repository root:

    python3 tools/gen_unicode_tables.py > include/forge/unicode_tables.hpp
"""

import sys
import unicodedata

MAX_CP = 0x110000


def punct_ranges():
    """Closed [lo, hi] ranges of code points whose general category is P*."""
    ranges = []
    lo = None
    prev = None
    for cp in range(MAX_CP):
        if 0xD800 <= cp <= 0xDFFF:
            is_p = False
        else:
            is_p = unicodedata.category(chr(cp)).startswith("P")
        if is_p:
            if lo is None:
                lo = cp
            prev = cp
        elif lo is not None:
            ranges.append((lo, prev))
            lo = None
    if lo is not None:
        ranges.append((lo, prev))
    return ranges


def lower_pairs():
    """1:1 simple lowercase mappings.  Multi-code-point expansions are
    skipped, and every target must map to itself so the transform is
    idempotent."""
    pairs = []
    for cp in range(MAX_CP):
        if 0xD800 <= cp <= 0xDFFF:
            continue
        low = chr(cp).lower()
        if len(low) != 1 or low == chr(cp):
            continue
        if low.lower() != low:
            continue
        pairs.append((cp, ord(low)))
    return pairs


def main():
    pr = punct_ranges()
    lp = lower_pairs()
    out = sys.stdout
    out.write(
        "// Copyright 2026 The Forge Authors\n"
        "//\n"
        '// Licensed under the Apache License, Version 2.0 (the "License");\n'
        "// you may not use this file except in compliance with the License.\n"
        "// You may obtain a copy of the License at\n"
        "//\n"
        "//     http://www.apache.org/licenses/LICENSE-2.0\n"
        "//\n"
        "// Unless required by applicable law or agreed to in writing, software\n"
        '// distributed under the License is distributed on an "AS IS" BASIS,\n'
        "// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.\n"
        "// See the License for the specific language governing permissions and\n"
        "// limitations under the License.\n"
        "\n"
        "// Generated by tools/gen_unicode_tables.py from Unicode "
        + unicodedata.unidata_version
        + " data.  Do not edit by hand.\n"
        "\n"
        "#ifndef FORGE_UNICODE_TABLES_HPP_\n"
        "#define FORGE_UNICODE_TABLES_HPP_\n"
        "\n"
        "#include <cstdint>\n"
        "\n"
        "namespace forge::detail {\n"
        "\n"
    )
    out.write("// General category P* code points, as closed [lo, hi] ranges.\n")
    out.write("inline constexpr uint32_t kPunctRanges[][2] = {\n")
    for i in range(0, len(pr), 6):
        row = pr[i : i + 6]
        out.write("    " + " ".join(f"{{0x{a:X}, 0x{b:X}}}," for a, b in row) + "\n")
    out.write("};\n")
    out.write(f"inline constexpr size_t kPunctRangeCount = {len(pr)};\n\n")
    out.write("// Simple 1:1 lowercase mappings (source, target), sorted by source.\n")
    out.write("inline constexpr uint32_t kLowerPairs[][2] = {\n")
    for i in range(0, len(lp), 6):
        row = lp[i : i + 6]
        out.write("    " + " ".join(f"{{0x{a:X}, 0x{b:X}}}," for a, b in row) + "\n")
    out.write("};\n")
    out.write(f"inline constexpr size_t kLowerPairCount = {len(lp)};\n")
    out.write("\n}  // namespace forge::detail\n\n#endif  // FORGE_UNICODE_TABLES_HPP_\n")


if __name__ == "__main__":
    main()
