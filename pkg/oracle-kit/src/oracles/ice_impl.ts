import { iceImpl } from '../handlers.js';
import { serve } from '../protocol.js';

serve(iceImpl);
