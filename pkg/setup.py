import os

from setuptools import setup

rootpath = os.path.abspath(os.path.dirname(__file__))


def read(*parts):
    return open(os.path.join(rootpath, *parts)).read()


package_data = {"": ["templates/*.svg"]}

packages = ["segrec"]

# Dependencies.
with open("requirements.txt") as f:
    tests_require = f.readlines()
install_requires = [t.strip() for t in tests_require]

setup(
    name="segrec",
    description="Reductions from pseudoline stretchability to segment and polyline recognition",
    license="MIT",
    long_description="{}".format(read("README.rst")),
    long_description_content_type="text/x-rst",
    keywords="computational geometry intersection graphs",
    classifiers=[
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
        "Development Status :: 3 - Alpha",
    ],
    platforms="any",
    packages=packages,
    package_data=package_data,
    python_requires=">=3.8",
    extras_require={"testing": ["pytest", "hypothesis"]},
    install_requires=install_requires,
    entry_points={"console_scripts": ["segrec=segrec.cli:main"]},
    zip_safe=False,
    use_scm_version={
        "write_to": "segrec/_version.py",
        "write_to_template": '__version__ = "{version}"',
        "tag_regex": r"^(?P<prefix>v)?(?P<version>[^\+]+)(?P<suffix>.*)?$",
    },
)
