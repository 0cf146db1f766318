import { iceCorr } from '../handlers.js';
import { serve } from '../protocol.js';

serve(iceCorr);
