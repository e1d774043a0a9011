# Copyright 2026 The sp4 Authors
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

"""Validity-typed packet program toolkit.

Parse programs, check them for unguarded header accesses, execute them on
packets with optional installed table entries, and work with the header-set
type algebra directly.
"""

try:
    from ._sp4core import (
        Program,
        check,
        denote,
        entails,
        normalize_type,
        parse,
        point_types,
        run,
        subtype,
    )
except ImportError:  # extension built out of tree, e.g. in a build dir
    from _sp4core import (
        Program,
        check,
        denote,
        entails,
        normalize_type,
        parse,
        point_types,
        run,
        subtype,
    )

__all__ = [
    "Program",
    "check",
    "denote",
    "entails",
    "normalize_type",
    "parse",
    "point_types",
    "run",
    "subtype",
]
