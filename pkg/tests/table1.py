"""Published metric-table fixture used by the ranking tests and the CLI tests.

Rows are sources, columns are targets. Grayscale sources are excluded
against the color targets.
"""

SOURCES = ["MNIST", "F-MNIST", "SVHN", "CIFAR-10", "TinyImageNet", "CelebA", "Ukiyo-E", "Church"]
TARGETS = ["MNIST", "CIFAR-10", "TinyImageNet", "Ukiyo-E"]

FID = {
    "MNIST": [1.2491, 258.246, 264.250, 398.280],
    "F-MNIST": [176.813, 188.367, 197.057, 387.049],
    "SVHN": [236.707, 168.615, 189.133, 372.444],
    "CIFAR-10": [259.045, 5.0724, 64.3941, 303.694],
    "TinyImageNet": [264.309, 64.0312, 6.4854, 257.078],
    "CelebA": [360.773, 303.490, 250.735, 301.108],
    "Ukiyo-E": [396.791, 300.511, 254.102, 5.9137],
    "Church": [350.708, 294.982, 254.991, 267.638],
}

CSID = {
    "MNIST": [0.1863, 29.298, 9.436, 201.550],
    "F-MNIST": [162.962, 19.051, -2.5571, 191.010],
    "SVHN": [212.473, 34.534, 21.668, 214.507],
    "CIFAR-10": [221.337, -0.1487, -7.109, 198.991],
    "TinyImageNet": [230.916, 12.892, 0.6743, 197.447],
    "CelebA": [204.794, 23.685, 8.829, 184.170],
    "Ukiyo-E": [250.226, 39.793, 18.727, 0.5494],
    "Church": [212.452, -4.655, -23.115, 198.750],
}

GRAYSCALE_SOURCES = {"MNIST", "F-MNIST"}
COLOR_TARGETS = {"CIFAR-10", "TinyImageNet", "Ukiyo-E"}

EXPECTED_TOP3 = {
    "MNIST": ["F-MNIST", "CelebA", "Church"],
    "CIFAR-10": ["TinyImageNet", "CelebA", "SVHN"],
    "TinyImageNet": ["CelebA", "Ukiyo-E", "SVHN"],
    "Ukiyo-E": ["CelebA", "TinyImageNet", "Church"],
}


def build_table():
    from sidmetrics.ranking import MetricTable

    table = MetricTable()
    for source in SOURCES:
        for column, target in enumerate(TARGETS):
            table.set_value(source, target, "fid", FID[source][column])
            table.set_value(source, target, "csid", CSID[source][column])
            if source in GRAYSCALE_SOURCES and target in COLOR_TARGETS:
                table.exclude(source, target, "grayscale-source")
    return table


def to_csv_text():
    lines = ["source,target,metric,value,excluded,reason"]
    for source in SOURCES:
        for column, target in enumerate(TARGETS):
            excluded = source in GRAYSCALE_SOURCES and target in COLOR_TARGETS
            flag = "1" if excluded else ""
            reason = "grayscale-source" if excluded else ""
            lines.append(f"{source},{target},fid,{FID[source][column]},{flag},{reason}")
            lines.append(f"{source},{target},csid,{CSID[source][column]},{flag},{reason}")
    return "\n".join(lines) + "\n"
