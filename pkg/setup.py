import os
from setuptools import setup, find_packages

setup_dict = dict(
    name="qmediator",
    version="0.1",
    packages=find_packages(exclude=["examples", "examples.*"]),
    python_requires=">=3.8",
    install_requires=["numpy>=1.16"],
    extras_require={
        "dev": ["pytest", "pytest-benchmark", "hypothesis", "scipy"]
    },
    entry_points={"console_scripts": ["qmediator=qmediator.cli:run"]},
)

if os.environ.get("USE_SCM_VERSION", "0") == "1":
    setup_dict["use_scm_version"] = {
        "root": "..",
        "relative_to": __file__,
        "local_scheme": "node-and-timestamp",
    }
    setup_dict["setup_requires"] = ["setuptools_scm"]

setup(**setup_dict)
