#include "eventformer/generators.hpp"

namespace eventformer {

// Generator parameter registry. This string is the authoritative copy;
// data/models.json in the repository mirrors it byte for byte.
const std::string& registry_json_text() {
  static const std::string text = R"registry({
  "hawkes": {
    "A": {
      "adjacency": [
        [
          0.15037453,
          0.10045448,
          0.10789028,
          0.17580114,
          0.01349208,
          0.01654871,
          0.00384014,
          0.1581418,
          0.14779747,
          0.16524382
        ],
        [
          0.1858717,
          0.1517864,
          0.08765006,
          0.14824807,
          0.02246419,
          0.12154197,
          0.02722749,
          0.17942359,
          0.0991161,
          0.07875789
        ],
        [
          0.05024778,
          0.14705235,
          0.0866379,
          0.10796424,
          0.0035688,
          0.11730922,
          0.11625704,
          0.11717598,
          0.17924869,
          0.12950002
        ],
        [
          0.06828233,
          0.08300669,
          0.13250303,
          0.01143879,
          0.12664085,
          0.12737611,
          0.03995854,
          0.02448733,
          0.05991018,
          0.0690806
        ],
        [
          0.10829905,
          0.0833048,
          0.18772458,
          0.01938165,
          0.03967254,
          0.03063796,
          0.12404668,
          0.04810838,
          0.0885677,
          0.04642443
        ],
        [
          0.03019353,
          0.02096386,
          0.1246585,
          0.02624547,
          0.03733743,
          0.07003299,
          0.15593352,
          0.01844271,
          0.1591532,
          0.01825224
        ],
        [
          0.18546165,
          0.08901222,
          0.18551894,
          0.11487999,
          0.14041038,
          0.00744305,
          0.05371431,
          0.02282927,
          0.05624673,
          0.02255028
        ],
        [
          0.06039543,
          0.07868212,
          0.01218371,
          0.13152315,
          0.10761619,
          0.05040616,
          0.09938195,
          0.01784238,
          0.10939112,
          0.1765038
        ],
        [
          0.06050668,
          0.1267631,
          0.02503273,
          0.13605401,
          0.0549677,
          0.03479404,
          0.11139803,
          0.00381908,
          0.15744288,
          0.00089182
        ],
        [
          0.12873957,
          0.05128336,
          0.13963744,
          0.18275114,
          0.04724637,
          0.10943116,
          0.11244817,
          0.10868939,
          0.04237051,
          0.18095826
        ]
      ],
      "baseline": [
        0.1097627,
        0.14303787,
        0.12055268,
        0.10897664,
        0.08473096,
        0.12917882,
        0.08751744,
        0.1783546,
        0.19273255,
        0.0766883
      ],
      "decay": 2.5,
      "end_time": 10.0
    },
    "B": {
      "adjacency": [
        [
          0.0,
          0.0,
          0.03514877,
          0.15096311,
          0.0,
          0.11526461,
          0.07174169,
          0.09604815,
          0.02413487,
          0.0
        ],
        [
          0.0,
          0.0,
          0.0,
          0.0,
          0.15066599,
          0.15379789,
          0.01462053,
          0.00671417,
          0.0,
          0.0
        ],
        [
          0.01690747,
          0.07239546,
          0.16467728,
          0.0,
          0.11894528,
          0.0,
          0.11802102,
          0.14348615,
          0.00314406,
          0.12896239
        ],
        [
          0.17000181,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0504772,
          0.04947341,
          0.0
        ],
        [
          0.0,
          0.11670321,
          0.03638242,
          0.0,
          0.0,
          0.00917392,
          0.0,
          0.0252251,
          0.10131151,
          0.1203002
        ],
        [
          0.0,
          0.07118317,
          0.11937903,
          0.07120436,
          0.0,
          0.0,
          0.0,
          0.08851807,
          0.16239168,
          0.10083865
        ],
        [
          0.0,
          0.02363421,
          0.02394394,
          0.1388041,
          0.06836732,
          0.02842716,
          0.15945428,
          0.0,
          0.0,
          0.12481123
        ],
        [
          0.15185513,
          0.0,
          0.1290996,
          0.0,
          0.0,
          0.15401787,
          0.0,
          0.16587219,
          0.11405672,
          0.10687992
        ],
        [
          0.0,
          0.0,
          0.07734744,
          0.09943488,
          0.07016556,
          0.04074891,
          0.0,
          0.0,
          0.00049346,
          0.10609756
        ],
        [
          0.05615574,
          0.09061013,
          0.15230831,
          0.06142066,
          0.15619243,
          0.10716606,
          0.00271994,
          0.15978585,
          0.11877677,
          0.17145652
        ]
      ],
      "baseline": [
        0.0834044009,
        0.144064899,
        2.28749635e-05,
        0.0604665145,
        0.0293511782,
        0.018467719,
        0.0372520423,
        0.0691121454,
        0.0793534948,
        0.107763347
      ],
      "decay": 2.5,
      "end_time": 40.0
    },
    "C": {
      "adjacency": [
        [
          0.0,
          0.09623737,
          0.0,
          0.0,
          0.0,
          0.14283231,
          0.0,
          0.0,
          0.0,
          0.0
        ],
        [
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0
        ],
        [
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.14434229,
          0.10548788,
          0.0,
          0.0
        ],
        [
          0.0,
          0.0,
          0.16178088,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0
        ],
        [
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0
        ],
        [
          0.14554646,
          0.0,
          0.0,
          0.0,
          0.0,
          0.09531432,
          0.0,
          0.0,
          0.0,
          0.0
        ],
        [
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.04899491
        ],
        [
          0.0,
          0.0,
          0.0,
          0.07048057,
          0.0,
          0.07546073,
          0.0,
          0.0,
          0.0,
          0.0
        ],
        [
          0.05697369,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.11709833,
          0.0,
          0.03100542,
          0.0
        ],
        [
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.04016475,
          0.0,
          0.10768499,
          0.06297179
        ]
      ],
      "baseline": [
        0.08719898,
        0.00518525,
        0.1099325,
        0.08706448,
        0.08407356,
        0.06606696,
        0.04092973,
        0.12385419,
        0.05993093,
        0.05336546
      ],
      "decay": 2.5,
      "end_time": 80.0
    },
    "D": {
      "adjacency": [
        [
          0.0,
          0.14343731,
          0.0,
          0.11247478,
          0.0,
          0.0,
          0.0,
          0.09416725,
          0.0,
          0.0
        ],
        [
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.15805746,
          0.0,
          0.08262718
        ],
        [
          0.0,
          0.0,
          0.03018515,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0
        ],
        [
          0.0,
          0.11090719,
          0.08158544,
          0.0,
          0.11109462,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0
        ],
        [
          0.0,
          0.0,
          0.14264684,
          0.0,
          0.0,
          0.11786607,
          0.0,
          0.0,
          0.01101593,
          0.0
        ],
        [
          0.04954495,
          0.0,
          0.0,
          0.0,
          0.0,
          0.12385743,
          0.0,
          0.0,
          0.02375575,
          0.05345351
        ],
        [
          0.0,
          0.14941748,
          0.02618691,
          0.0,
          0.13608937,
          0.0,
          0.06263167,
          0.0,
          0.04097688,
          0.14101171
        ],
        [
          0.0,
          0.11902986,
          0.0,
          0.04889382,
          0.0,
          0.0,
          0.01569298,
          0.03678315,
          0.0,
          0.0
        ],
        [
          0.05359555,
          0.0,
          0.0,
          0.09188512,
          0.0,
          0.14255311,
          0.0,
          0.0,
          0.0,
          0.0
        ],
        [
          0.12792415,
          0.05843994,
          0.16156482,
          0.11931973,
          0.0,
          0.00774966,
          0.00947755,
          0.0,
          0.0,
          0.0
        ]
      ],
      "baseline": [
        0.11015958,
        0.14162956,
        0.05818095,
        0.10216552,
        0.17858939,
        0.17925862,
        0.02511706,
        0.04144858,
        0.01029344,
        0.08816197
      ],
      "decay": [
        [
          8.0,
          9.0,
          2.0,
          7.0,
          3.0,
          3.0,
          2.0,
          4.0,
          6.0,
          9.0
        ],
        [
          2.0,
          9.0,
          8.0,
          9.0,
          2.0,
          1.0,
          6.0,
          5.0,
          2.0,
          6.0
        ],
        [
          5.0,
          8.0,
          7.0,
          1.0,
          1.0,
          3.0,
          5.0,
          6.0,
          9.0,
          9.0
        ],
        [
          8.0,
          6.0,
          2.0,
          2.0,
          2.0,
          6.0,
          6.0,
          8.0,
          5.0,
          4.0
        ],
        [
          1.0,
          1.0,
          1.0,
          1.0,
          3.0,
          3.0,
          8.0,
          1.0,
          6.0,
          1.0
        ],
        [
          2.0,
          5.0,
          2.0,
          3.0,
          3.0,
          5.0,
          9.0,
          1.0,
          7.0,
          1.0
        ],
        [
          5.0,
          2.0,
          6.0,
          2.0,
          9.0,
          9.0,
          8.0,
          1.0,
          1.0,
          2.0
        ],
        [
          8.0,
          9.0,
          8.0,
          5.0,
          1.0,
          1.0,
          5.0,
          4.0,
          1.0,
          9.0
        ],
        [
          3.0,
          8.0,
          3.0,
          2.0,
          4.0,
          3.0,
          5.0,
          2.0,
          3.0,
          3.0
        ],
        [
          8.0,
          4.0,
          5.0,
          2.0,
          7.0,
          8.0,
          2.0,
          1.0,
          1.0,
          6.0
        ]
      ],
      "end_time": 50.0
    },
    "E": {
      "adjacency": [
        [
          0.02186539,
          0.09356695,
          0.0,
          0.16101355,
          0.11527002,
          0.09149395,
          0.0,
          0.0,
          0.15672219,
          0.0
        ],
        [
          0.0,
          0.0,
          0.14241135,
          0.0,
          0.11167029,
          0.0,
          0.0,
          0.0,
          0.0934937,
          0.0
        ],
        [
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.15692693,
          0.0
        ],
        [
          0.08203618,
          0.0,
          0.0,
          0.02996925,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0
        ],
        [
          0.0,
          0.0,
          0.11011391,
          0.08100189,
          0.0,
          0.11029999,
          0.0,
          0.0,
          0.0,
          0.0
        ],
        [
          0.0,
          0.0,
          0.0,
          0.14162654,
          0.0,
          0.0,
          0.11702301,
          0.0,
          0.0,
          0.01093714
        ],
        [
          0.0,
          0.04919057,
          0.0,
          0.0,
          0.0,
          0.0,
          0.12297152,
          0.0,
          0.0,
          0.02358583
        ],
        [
          0.05307117,
          0.0,
          0.14834875,
          0.02599961,
          0.0,
          0.13511597,
          0.0,
          0.06218368,
          0.0,
          0.04068378
        ],
        [
          0.1400031,
          0.0,
          0.11817848,
          0.0,
          0.0485441,
          0.0,
          0.0,
          0.01558073,
          0.03652006,
          0.0
        ],
        [
          0.0,
          0.05321219,
          0.0,
          0.0,
          0.0912279,
          0.0,
          0.14153347,
          0.0,
          0.0,
          0.0
        ]
      ],
      "baseline": [
        0.2,
        0.2,
        0.2,
        0.2,
        0.2,
        0.2,
        0.2,
        0.2,
        0.2,
        0.2
      ],
      "decay": [
        [
          9.0,
          4.0,
          9.0,
          9.0,
          1.0,
          6.0,
          4.0,
          6.0,
          8.0,
          7.0
        ],
        [
          1.0,
          5.0,
          8.0,
          9.0,
          2.0,
          7.0,
          3.0,
          3.0,
          2.0,
          4.0
        ],
        [
          6.0,
          9.0,
          2.0,
          9.0,
          8.0,
          9.0,
          2.0,
          1.0,
          6.0,
          5.0
        ],
        [
          2.0,
          6.0,
          5.0,
          8.0,
          7.0,
          1.0,
          1.0,
          3.0,
          5.0,
          6.0
        ],
        [
          9.0,
          9.0,
          8.0,
          6.0,
          2.0,
          2.0,
          2.0,
          6.0,
          6.0,
          8.0
        ],
        [
          5.0,
          4.0,
          1.0,
          1.0,
          1.0,
          1.0,
          3.0,
          3.0,
          8.0,
          1.0
        ],
        [
          6.0,
          1.0,
          2.0,
          5.0,
          2.0,
          3.0,
          3.0,
          5.0,
          9.0,
          1.0
        ],
        [
          7.0,
          1.0,
          5.0,
          2.0,
          6.0,
          2.0,
          9.0,
          9.0,
          8.0,
          1.0
        ],
        [
          1.0,
          2.0,
          8.0,
          9.0,
          8.0,
          5.0,
          1.0,
          1.0,
          5.0,
          4.0
        ],
        [
          1.0,
          9.0,
          3.0,
          8.0,
          3.0,
          2.0,
          4.0,
          3.0,
          5.0,
          2.0
        ]
      ],
      "end_time": 50.0
    },
    "F": {
      "adjacency": [
        [
          0.15693854,
          0.04896059,
          0.0400508,
          0.0,
          0.0,
          0.13021228,
          0.0,
          0.10699903,
          0.0,
          0.15329807
        ],
        [
          0.0784283,
          0.0,
          0.0,
          0.0,
          0.0,
          0.0,
          0.00310706,
          0.0090892,
          0.07758874,
          0.0
        ],
        [
          0.01672489,
          0.0,
          0.0,
          0.07851303,
          0.0,
          0.0,
          0.12848331,
          0.08859293,
          0.0,
          0.0
        ],
        [
          0.09984995,
          0.0,
          0.0,
          0.10541925,
          0.0,
          0.08032527,
          0.0,
          0.0,
          0.0,
          0.0
        ],
        [
          0.14642469,
          0.06629365,
          0.0,
          0.0,
          0.0,
          0.0,
          0.11891738,
          0.04166225,
          0.09808829,
          0.17638655
        ],
        [
          0.00976324,
          0.1100343,
          0.02003261,
          0.0,
          0.0,
          0.05993539,
          0.09739541,
          0.0,
          0.0,
          0.0
        ],
        [
          0.0,
          0.0,
          0.0,
          0.04672133,
          0.16916,
          0.0,
          0.17341419,
          0.12078975,
          0.14441602,
          0.0
        ],
        [
          0.0,
          0.17305542,
          0.06927975,
          0.0,
          0.03408974,
          0.0,
          0.08457162,
          0.03787486,
          0.10863292,
          0.0
        ],
        [
          0.07186225,
          0.05760593,
          0.0,
          0.0,
          0.08042031,
          0.04403479,
          0.1033595,
          0.17046747,
          0.0,
          0.05083523
        ],
        [
          0.0,
          0.10029222,
          0.0,
          0.1022067,
          0.0,
          0.0,
          0.0588527,
          0.0,
          0.03530513,
          0.0
        ]
      ],
      "baseline": [
        0.21736198,
        0.11134775,
        0.16980704,
        0.33791045,
        0.00188754,
        0.04862765,
        0.26829963,
        0.3303411,
        0.05468264,
        0.23003733
      ],
      "decay": [
        [
          5.0,
          1.0,
          7.0,
          3.0,
          5.0,
          2.0,
          6.0,
          4.0,
          5.0,
          5.0
        ],
        [
          4.0,
          8.0,
          2.0,
          2.0,
          8.0,
          8.0,
          1.0,
          3.0,
          4.0,
          3.0
        ],
        [
          6.0,
          9.0,
          2.0,
          1.0,
          8.0,
          7.0,
          3.0,
          1.0,
          9.0,
          3.0
        ],
        [
          6.0,
          2.0,
          9.0,
          2.0,
          6.0,
          5.0,
          3.0,
          9.0,
          4.0,
          6.0
        ],
        [
          1.0,
          4.0,
          7.0,
          4.0,
          5.0,
          8.0,
          7.0,
          4.0,
          1.0,
          5.0
        ],
        [
          5.0,
          6.0,
          8.0,
          7.0,
          7.0,
          3.0,
          5.0,
          3.0,
          8.0,
          2.0
        ],
        [
          7.0,
          7.0,
          1.0,
          8.0,
          3.0,
          4.0,
          6.0,
          5.0,
          3.0,
          5.0
        ],
        [
          4.0,
          8.0,
          1.0,
          1.0,
          6.0,
          7.0,
          7.0,
          6.0,
          7.0,
          5.0
        ],
        [
          8.0,
          4.0,
          3.0,
          4.0,
          9.0,
          8.0,
          2.0,
          6.0,
          4.0,
          1.0
        ],
        [
          7.0,
          3.0,
          4.0,
          5.0,
          9.0,
          9.0,
          6.0,
          3.0,
          8.0,
          6.0
        ]
      ],
      "end_time": 40.0
    }
  },
  "pgem": {
    "A": {
      "end_time": 100.0,
      "labels": [
        "A",
        "B",
        "C",
        "D",
        "E"
      ],
      "lambdas": {
        "A": {
          "()": 0.2
        },
        "B": {
          "()": 0.05
        },
        "C": {
          "(0,)": 0.2,
          "(1,)": 0.3
        },
        "D": {
          "(0, 0)": 0.1,
          "(0, 1)": 0.05,
          "(1, 0)": 0.3,
          "(1, 1)": 0.2
        },
        "E": {
          "(0,)": 0.1,
          "(1,)": 0.3
        }
      },
      "parents": {
        "A": [],
        "B": [],
        "C": [
          "B"
        ],
        "D": [
          "A",
          "B"
        ],
        "E": [
          "C"
        ]
      },
      "windows": {
        "A": [],
        "B": [],
        "C": [
          15.0
        ],
        "D": [
          15.0,
          30.0
        ],
        "E": [
          15.0
        ]
      }
    },
    "B": {
      "end_time": 100.0,
      "labels": [
        "A",
        "B",
        "C",
        "D",
        "E"
      ],
      "lambdas": {
        "A": {
          "(0,)": 0.3,
          "(1,)": 0.2
        },
        "B": {
          "(0,)": 0.2,
          "(1,)": 0.4
        },
        "C": {
          "(0,)": 0.4,
          "(1,)": 0.1
        },
        "D": {
          "(0,)": 0.05,
          "(1,)": 0.2
        },
        "E": {
          "(0,)": 0.1,
          "(1,)": 0.3
        }
      },
      "parents": {
        "A": [
          "B"
        ],
        "B": [
          "B"
        ],
        "C": [
          "B"
        ],
        "D": [
          "A"
        ],
        "E": [
          "C"
        ]
      },
      "windows": {
        "A": [
          15.0
        ],
        "B": [
          30.0
        ],
        "C": [
          15.0
        ],
        "D": [
          30.0
        ],
        "E": [
          30.0
        ]
      }
    },
    "C": {
      "end_time": 100.0,
      "labels": [
        "A",
        "B",
        "C",
        "D",
        "E"
      ],
      "lambdas": {
        "A": {
          "(0, 0)": 0.1,
          "(0, 1)": 0.05,
          "(1, 0)": 0.3,
          "(1, 1)": 0.2
        },
        "B": {
          "()": 0.2
        },
        "C": {
          "(0, 0)": 0.2,
          "(0, 1)": 0.05,
          "(1, 0)": 0.4,
          "(1, 1)": 0.3
        },
        "D": {
          "(0,)": 0.1,
          "(1,)": 0.2
        },
        "E": {
          "(0,)": 0.1,
          "(1,)": 0.4
        }
      },
      "parents": {
        "A": [
          "B",
          "D"
        ],
        "B": [],
        "C": [
          "B",
          "E"
        ],
        "D": [
          "B"
        ],
        "E": [
          "B"
        ]
      },
      "windows": {
        "A": [
          15.0,
          30.0
        ],
        "B": [],
        "C": [
          15.0,
          30.0
        ],
        "D": [
          30.0
        ],
        "E": [
          30.0
        ]
      }
    },
    "D": {
      "end_time": 100.0,
      "labels": [
        "A",
        "B",
        "C",
        "D",
        "E"
      ],
      "lambdas": {
        "A": {
          "(0,)": 0.05,
          "(1,)": 0.2
        },
        "B": {
          "(0,)": 0.1,
          "(1,)": 0.3
        },
        "C": {
          "(0,)": 0.4,
          "(1,)": 0.2
        },
        "D": {
          "(0, 0)": 0.1,
          "(0, 1)": 0.3,
          "(1, 0)": 0.05,
          "(1, 1)": 0.2
        },
        "E": {
          "(0, 0)": 0.1,
          "(0, 1)": 0.02,
          "(1, 0)": 0.4,
          "(1, 1)": 0.1
        }
      },
      "parents": {
        "A": [
          "B"
        ],
        "B": [
          "C"
        ],
        "C": [
          "A"
        ],
        "D": [
          "A",
          "B"
        ],
        "E": [
          "B",
          "C"
        ]
      },
      "windows": {
        "A": [
          15.0
        ],
        "B": [
          30.0
        ],
        "C": [
          15.0
        ],
        "D": [
          15.0,
          30.0
        ],
        "E": [
          30.0,
          15.0
        ]
      }
    },
    "E": {
      "end_time": 100.0,
      "labels": [
        "A",
        "B",
        "C",
        "D",
        "E"
      ],
      "lambdas": {
        "A": {
          "(0,)": 0.1,
          "(1,)": 0.3
        },
        "B": {
          "(0, 0)": 0.01,
          "(0, 1)": 0.05,
          "(1, 0)": 0.1,
          "(1, 1)": 0.5
        },
        "C": {
          "(0,)": 0.2,
          "(1,)": 0.4
        },
        "D": {
          "(0, 0)": 0.05,
          "(0, 1)": 0.02,
          "(1, 0)": 0.2,
          "(1, 1)": 0.1
        },
        "E": {
          "(0, 0)": 0.1,
          "(0, 1)": 0.01,
          "(1, 0)": 0.3,
          "(1, 1)": 0.1
        }
      },
      "parents": {
        "A": [
          "A"
        ],
        "B": [
          "A",
          "C"
        ],
        "C": [
          "C"
        ],
        "D": [
          "A",
          "E"
        ],
        "E": [
          "C",
          "D"
        ]
      },
      "windows": {
        "A": [
          15.0
        ],
        "B": [
          30.0,
          30.0
        ],
        "C": [
          15.0
        ],
        "D": [
          15.0,
          30.0
        ],
        "E": [
          15.0,
          30.0
        ]
      }
    }
  }
}
)registry";
  return text;
}

}  // namespace eventformer
