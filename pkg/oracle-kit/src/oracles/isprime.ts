import { isprime } from '../handlers.js';
import { serve } from '../protocol.js';

serve(isprime);
