from os import path
from setuptools import setup, find_packages

DIR = path.abspath(path.dirname(__file__))
with open(path.join(DIR, "README.md"), encoding="utf-8") as f:
    long_desc = f.read()


setup(
    name="blowuplab",
    description="Weights, divided differences and blow-up times behind the "
    "multivariate generalization of 1 + x <= e^x",
    long_description=long_desc,
    long_description_content_type="text/markdown",
    version="0.1.0",
    packages=find_packages(exclude=["*.tests", "*.tests.*", "tests"]),
    package_data={"blowuplab.utils.configs": ["default.yaml"]},
    include_package_data=True,
    zip_safe=False,
    python_requires=">=3.7",
    install_requires=[
        "numpy>=1.19.5",
        "scipy",
        "wrapt",
        "ray>=1.3.0",
        "psutil",
        "PyYAML>=5.4.1",
    ],
    extras_require={
        "dev": [
            "black",
            "pytest",
            "sphinx",
            "sphinx-rtd-theme",
            "sphinxcontrib-apidoc",
        ],
    },
    entry_points={"console_scripts": ["blowuplab=blowuplab.cli:main"]},
)
