from setuptools import setup, find_packages

setup(
    name='lbboost',
    version='0.1',
    packages=find_packages(exclude=['tests', 'tests.*']),
    description='Location based boosting of Hit-or-Shift weak detectors for small object detection in grayscale images',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Image Recognition',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12'
    ],
    keywords='object detection, boosting, small objects, local maxima, ROC, image analysis',
    install_requires=[
        'astropy>=5.3.3',
        'methodtools>=0.4.7',
        'numpy>=1.24.0',
        'rioxarray>=0.15.0',
        'scipy>=1.8.0',
        'xarray>=2023.9.0',
    ],
    python_requires='>=3.10',
    test_suite='tests',
)
