"""Builds the extension module with cargo; no C toolchain involved."""

import shutil
import subprocess
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

ROOT = Path(__file__).resolve().parent.parent


class CargoBuild(build_ext):
    def build_extension(self, ext):
        subprocess.run(
            ["cargo", "build", "--release", "-p", "akmove-py"],
            cwd=ROOT,
            check=True,
        )
        release = ROOT / "target" / "release"
        for name in ("libakmove.so", "libakmove.dylib", "akmove.dll"):
            lib = release / name
            if lib.exists():
                break
        else:
            raise FileNotFoundError("cargo did not produce the akmove cdylib")
        dest = Path(self.get_ext_fullpath(ext.name))
        dest.parent.mkdir(parents=True, exist_ok=True)
        shutil.copyfile(lib, dest)


setup(
    ext_modules=[Extension("akmove", sources=[])],
    cmdclass={"build_ext": CargoBuild},
)
