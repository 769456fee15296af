from .BaseGuidanceProvider import BaseGuidanceProvider, ExchangeReference, GuidanceCall
from .ExchangeLog import ExchangeLog, GuidanceExchange, exchange_id, read_exchange_log
from .RemoteGuidanceProvider import RemoteGuidanceProvider
from .ReplayGuidanceProvider import ReplayGuidanceProvider
from .ScriptedGuidanceProvider import ScriptedGuidanceProvider
from .parsing import (
    parse_init_response,
    parse_label,
    parse_update_response,
    render_directions,
    render_label,
    render_weights,
)
from .prompts import (
    build_init_prompt,
    build_update_prompt,
    render_feature_schema,
    render_mismatches,
    render_theta,
)
