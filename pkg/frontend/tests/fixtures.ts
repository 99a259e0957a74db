/** Recorded responses of a real backend run: a 10-minute scenario with a
 * gas spike at [120 s, 300 s) and a ramped temperature drift, served over
 * MQTT + HTTP, then captured verbatim. Tests render every view from these
 * fixtures without any live backend. */

import type {
  AlertConfig,
  AlertEvent,
  ChannelMeta,
  FeedResponse,
  LatestSalubrity,
  ReportJson,
  SurfaceGrid,
} from "../src/types.js";

export const CHANNELS_FIXTURE: { channels: ChannelMeta[] } = {
  "channels": [
    {
      "channel_id": "workshop-1",
      "name": "Workshop bay 1",
      "device_id": "sim-01",
      "fields": {
        "field1": {
          "name": "temperature_c",
          "unit": "degC"
        },
        "field2": {
          "name": "humidity_pct",
          "unit": "%RH"
        },
        "field3": {
          "name": "mq135_adc",
          "unit": "count"
        }
      },
      "entry_count": 60,
      "last_entry_at": "2024-01-01T00:09:50Z"
    }
  ]
};

export const FEED_FIXTURE: FeedResponse = {
  "channel": {
    "channel_id": "workshop-1",
    "name": "Workshop bay 1",
    "device_id": "sim-01",
    "fields": {
      "field1": {
        "name": "temperature_c",
        "unit": "degC"
      },
      "field2": {
        "name": "humidity_pct",
        "unit": "%RH"
      },
      "field3": {
        "name": "mq135_adc",
        "unit": "count"
      }
    },
    "entry_count": 60,
    "last_entry_at": "2024-01-01T00:09:50Z"
  },
  "feed": [
    {
      "entry_id": 9,
      "created_at": "2024-01-01T00:01:20Z",
      "field1": 21,
      "field2": 40,
      "field3": 512,
      "ppm": 110.58218054180654,
      "salubrity": 100.0,
      "flags": []
    },
    {
      "entry_id": 10,
      "created_at": "2024-01-01T00:01:30Z",
      "field1": 21,
      "field2": 40,
      "field3": 512,
      "ppm": 110.58218054180654,
      "salubrity": 100.0,
      "flags": []
    },
    {
      "entry_id": 11,
      "created_at": "2024-01-01T00:01:40Z",
      "field1": 21,
      "field2": 40,
      "field3": 512,
      "ppm": 110.58218054180654,
      "salubrity": 100.0,
      "flags": []
    },
    {
      "entry_id": 12,
      "created_at": "2024-01-01T00:01:50Z",
      "field1": 21,
      "field2": 40,
      "field3": 512,
      "ppm": 110.58218054180654,
      "salubrity": 100.0,
      "flags": []
    },
    {
      "entry_id": 13,
      "created_at": "2024-01-01T00:02:00Z",
      "field1": 21,
      "field2": 40,
      "field3": 653,
      "ppm": 509.93358901182637,
      "salubrity": 100.0,
      "flags": []
    },
    {
      "entry_id": 14,
      "created_at": "2024-01-01T00:02:10Z",
      "field1": 21,
      "field2": 40,
      "field3": 653,
      "ppm": 509.93358901182637,
      "salubrity": 100.0,
      "flags": []
    },
    {
      "entry_id": 15,
      "created_at": "2024-01-01T00:02:20Z",
      "field1": 21,
      "field2": 40,
      "field3": 653,
      "ppm": 509.93358901182637,
      "salubrity": 100.0,
      "flags": []
    },
    {
      "entry_id": 16,
      "created_at": "2024-01-01T00:02:30Z",
      "field1": 21,
      "field2": 40,
      "field3": 653,
      "ppm": 509.93358901182637,
      "salubrity": 100.0,
      "flags": []
    },
    {
      "entry_id": 17,
      "created_at": "2024-01-01T00:02:40Z",
      "field1": 21,
      "field2": 40,
      "field3": 653,
      "ppm": 509.93358901182637,
      "salubrity": 100.0,
      "flags": []
    },
    {
      "entry_id": 18,
      "created_at": "2024-01-01T00:02:50Z",
      "field1": 21,
      "field2": 40,
      "field3": 653,
      "ppm": 509.93358901182637,
      "salubrity": 100.0,
      "flags": []
    },
    {
      "entry_id": 19,
      "created_at": "2024-01-01T00:03:00Z",
      "field1": 21,
      "field2": 40,
      "field3": 653,
      "ppm": 509.93358901182637,
      "salubrity": 100.0,
      "flags": []
    },
    {
      "entry_id": 20,
      "created_at": "2024-01-01T00:03:10Z",
      "field1": 21,
      "field2": 40,
      "field3": 653,
      "ppm": 509.93358901182637,
      "salubrity": 100.0,
      "flags": []
    },
    {
      "entry_id": 21,
      "created_at": "2024-01-01T00:03:20Z",
      "field1": 21,
      "field2": 40,
      "field3": 653,
      "ppm": 509.93358901182637,
      "salubrity": 100.0,
      "flags": []
    },
    {
      "entry_id": 22,
      "created_at": "2024-01-01T00:03:30Z",
      "field1": 21,
      "field2": 40,
      "field3": 653,
      "ppm": 509.93358901182637,
      "salubrity": 100.0,
      "flags": []
    },
    {
      "entry_id": 23,
      "created_at": "2024-01-01T00:03:40Z",
      "field1": 21,
      "field2": 40,
      "field3": 653,
      "ppm": 509.93358901182637,
      "salubrity": 100.0,
      "flags": []
    },
    {
      "entry_id": 24,
      "created_at": "2024-01-01T00:03:50Z",
      "field1": 21,
      "field2": 40,
      "field3": 653,
      "ppm": 509.93358901182637,
      "salubrity": 100.0,
      "flags": []
    },
    {
      "entry_id": 25,
      "created_at": "2024-01-01T00:04:00Z",
      "field1": 21,
      "field2": 40,
      "field3": 653,
      "ppm": 509.93358901182637,
      "salubrity": 100.0,
      "flags": []
    },
    {
      "entry_id": 26,
      "created_at": "2024-01-01T00:04:10Z",
      "field1": 21,
      "field2": 40,
      "field3": 653,
      "ppm": 509.93358901182637,
      "salubrity": 100.0,
      "flags": []
    }
  ],
  "truncated": false
};

export const LATEST_FIXTURE: LatestSalubrity = {
  "channel_id": "workshop-1",
  "entry_id": 60,
  "ts": "2024-01-01T00:09:50Z",
  "value": 100.0,
  "temp_factor": 1.0,
  "hum_factor": 1.0
};

export const SURFACE_CORNERS_FIXTURE: SurfaceGrid = {
  "t_axis": [
    17.0,
    25.0
  ],
  "h_axis": [
    28.0,
    52.0
  ],
  "values": [
    [
      36.787944117144235,
      36.787944117144235
    ],
    [
      36.787944117144235,
      36.787944117144235
    ]
  ]
};

export const SURFACE_GRID_FIXTURE: SurfaceGrid = {
  "t_axis": [
    5.0,
    9.0,
    13.0,
    17.0,
    21.0,
    25.0,
    29.0,
    33.0,
    37.0
  ],
  "h_axis": [
    10.0,
    17.5,
    25.0,
    32.5,
    40.0,
    47.5,
    55.0,
    62.5,
    70.0
  ],
  "values": [
    [
      0.0014739199215286485,
      0.005784101105861685,
      0.015358598268134713,
      0.027594403073589846,
      0.033546262790251184,
      0.027594403073589846,
      0.015358598268134713,
      0.005784101105861685,
      0.0014739199215286485
    ],
    [
      0.0488095243523415,
      0.1915431222953817,
      0.50860692310127,
      0.913801129312256,
      1.1108996538242306,
      0.913801129312256,
      0.50860692310127,
      0.1915431222953817,
      0.0488095243523415
    ],
    [
      0.5946217356472095,
      2.333472930577775,
      6.196100769053199,
      11.132376739130574,
      13.53352832366127,
      11.132376739130574,
      6.196100769053199,
      2.333472930577775,
      0.5946217356472095
    ],
    [
      2.664909733635549,
      10.457900128900146,
      27.768997095378996,
      49.8918511586472,
      60.653065971263345,
      49.8918511586472,
      27.768997095378996,
      10.457900128900146,
      2.664909733635549
    ],
    [
      4.393693362340742,
      17.24216238937528,
      45.783336177161424,
      82.25775623986647,
      100.0,
      82.25775623986647,
      45.783336177161424,
      17.24216238937528,
      4.393693362340742
    ],
    [
      2.664909733635549,
      10.457900128900146,
      27.768997095378996,
      49.8918511586472,
      60.653065971263345,
      49.8918511586472,
      27.768997095378996,
      10.457900128900146,
      2.664909733635549
    ],
    [
      0.5946217356472095,
      2.333472930577775,
      6.196100769053199,
      11.132376739130574,
      13.53352832366127,
      11.132376739130574,
      6.196100769053199,
      2.333472930577775,
      0.5946217356472095
    ],
    [
      0.0488095243523415,
      0.1915431222953817,
      0.50860692310127,
      0.913801129312256,
      1.1108996538242306,
      0.913801129312256,
      0.50860692310127,
      0.1915431222953817,
      0.0488095243523415
    ],
    [
      0.0014739199215286485,
      0.005784101105861685,
      0.015358598268134713,
      0.027594403073589846,
      0.033546262790251184,
      0.027594403073589846,
      0.015358598268134713,
      0.005784101105861685,
      0.0014739199215286485
    ]
  ]
};

export const ALERT_CONFIG_FIXTURE: AlertConfig = {
  "channel_id": "workshop-1",
  "rules": [
    {
      "rule_id": "salubrity-low",
      "kind": "SALUBRITY_BELOW",
      "threshold": 50.0,
      "hysteresis": 5.0,
      "min_consecutive": 1
    },
    {
      "rule_id": "gas-high",
      "kind": "GAS_PPM_ABOVE",
      "threshold": 300.0,
      "hysteresis": 25.0,
      "min_consecutive": 1
    }
  ],
  "states": {
    "salubrity-low": "IDLE",
    "gas-high": "IDLE"
  }
};

export const ALERT_EVENTS_FIXTURE: { channel_id: string; events: AlertEvent[] } = {
  "channel_id": "workshop-1",
  "events": [
    {
      "rule_id": "gas-high",
      "kind": "RAISE",
      "ts": "2024-01-01T00:02:00Z",
      "value": 509.93358901182637
    },
    {
      "rule_id": "gas-high",
      "kind": "CLEAR",
      "ts": "2024-01-01T00:05:00Z",
      "value": 110.58218054180654
    },
    {
      "rule_id": "salubrity-low",
      "kind": "RAISE",
      "ts": "2024-01-01T00:06:50Z",
      "value": 45.783336177161424
    },
    {
      "rule_id": "salubrity-low",
      "kind": "CLEAR",
      "ts": "2024-01-01T00:07:20Z",
      "value": 60.653065971263345
    }
  ]
};

export const REPORT_FIXTURE: ReportJson = {
  "channel_id": "workshop-1",
  "aggregation": "hourly_mean",
  "columns": [
    "ts",
    "temperature_c",
    "humidity_pct",
    "mq135_adc",
    "ppm",
    "salubrity"
  ],
  "rows": [
    {
      "ts": "2024-01-01T00:00:00Z",
      "temperature_c": 21.6,
      "humidity_pct": 40.0,
      "mq135_adc": 554.3,
      "ppm": 230.3876030828129,
      "salubrity": 94.44419998071125
    }
  ]
};

export const REPORT_CSV_FIXTURE: string = "ts,temperature_c,humidity_pct,mq135_adc,ppm,salubrity\r\n2024-01-01T00:00:00Z,21.6,40.0,554.3,230.3876030828129,94.44419998071125\r\n";
