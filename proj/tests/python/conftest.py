import os
import sys

# Under ctest, import the module built in the build tree rather than any installed copy.
_pkg = os.environ.get("NOTEGRADE_PYPKG_DIR")
if _pkg:
    sys.meta_path[:] = [f for f in sys.meta_path if not type(f).__module__.startswith("_editable_skbc_")]
    sys.path.insert(0, _pkg)
    for name in [m for m in sys.modules if m == "notegrade" or m.startswith("notegrade.")]:
        del sys.modules[name]
